#pragma once

#include "ttau/monotone_lab.hpp"
#include "ttau/numerics.hpp"
#include "ttau/quasi_pure.hpp"
#include "ttau/states.hpp"
#include "ttau/tau_mixed.hpp"
#include "ttau/tau_pure.hpp"
