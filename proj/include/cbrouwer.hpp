#ifndef CBROUWER_HPP
#define CBROUWER_HPP

#include "cbrouwer/builtin.hpp"
#include "cbrouwer/descent.hpp"
#include "cbrouwer/error.hpp"
#include "cbrouwer/expression.hpp"
#include "cbrouwer/l0_linalg.hpp"
#include "cbrouwer/labeling.hpp"
#include "cbrouwer/local_function.hpp"
#include "cbrouwer/oracle.hpp"
#include "cbrouwer/prob_space.hpp"
#include "cbrouwer/problem.hpp"
#include "cbrouwer/simplex.hpp"
#include "cbrouwer/solver.hpp"

#endif  // CBROUWER_HPP
