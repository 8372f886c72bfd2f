#pragma once

#include "shrinktest/bound_verification.hpp"
#include "shrinktest/decision_rules.hpp"
#include "shrinktest/errors.hpp"
#include "shrinktest/full_bayes.hpp"
#include "shrinktest/io.hpp"
#include "shrinktest/math.hpp"
#include "shrinktest/posterior_shrinkage.hpp"
#include "shrinktest/prior_families.hpp"
#include "shrinktest/quadrature.hpp"
#include "shrinktest/rng.hpp"
#include "shrinktest/shrinkage_tables.hpp"
#include "shrinktest/simulation.hpp"
#include "shrinktest/two_groups_oracle.hpp"
