#pragma once

#include "tatonnement/agents.hpp"
#include "tatonnement/analysis.hpp"
#include "tatonnement/dynamics.hpp"
#include "tatonnement/economy.hpp"
#include "tatonnement/geometry.hpp"
#include "tatonnement/io.hpp"
#include "tatonnement/price_vector.hpp"
#include "tatonnement/simulation.hpp"
#include "tatonnement/trajectory.hpp"
