#pragma once

#include "errsum/decision.hpp"
#include "errsum/design.hpp"
#include "errsum/errors.hpp"
#include "errsum/evidence.hpp"
#include "errsum/report.hpp"
#include "errsum/reproduce.hpp"
#include "errsum/scenario.hpp"
#include "errsum/special_functions.hpp"
#include "errsum/verification/consistency.hpp"
#include "errsum/verification/discrete.hpp"
#include "errsum/verification/lemma2.hpp"
#include "errsum/verification/matching.hpp"
#include "errsum/verification/monte_carlo.hpp"
#include "errsum/verification/quadrature.hpp"
#include "errsum/verification/suites.hpp"
