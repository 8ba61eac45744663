#pragma once

#include "hecke/arithmetic.hpp"
#include "hecke/class_number.hpp"
#include "hecke/cyclotomic.hpp"
#include "hecke/dirichlet.hpp"
#include "hecke/errors.hpp"
#include "hecke/level_one.hpp"
#include "hecke/li_coefficients.hpp"
#include "hecke/newforms.hpp"
#include "hecke/special_series.hpp"
#include "hecke/trace_cache.hpp"
#include "hecke/trace_formula.hpp"
