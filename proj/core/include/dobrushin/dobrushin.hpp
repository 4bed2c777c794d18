#pragma once

#include "dobrushin/coefficient.hpp"
#include "dobrushin/ergodicity.hpp"
#include "dobrushin/linalg.hpp"
#include "dobrushin/markov.hpp"
#include "dobrushin/perturbation.hpp"
#include "dobrushin/qubit_example.hpp"
#include "dobrushin/report.hpp"
#include "dobrushin/sampling.hpp"
#include "dobrushin/semigroup.hpp"
#include "dobrushin/state_space.hpp"
#include "dobrushin/types.hpp"
