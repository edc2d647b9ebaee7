#pragma once

#include "padic_cf/error.hpp"
#include "padic_cf/exact_arith.hpp"
#include "padic_cf/hensel_dynamics.hpp"
#include "padic_cf/algorithm.hpp"
#include "padic_cf/quadratic_element.hpp"
#include "padic_cf/cf_engine.hpp"
#include "padic_cf/census.hpp"
