#pragma once

#include "dfun/alphabet.hpp"
#include "dfun/decomposition.hpp"
#include "dfun/error.hpp"
#include "dfun/formula.hpp"
#include "dfun/function.hpp"
#include "dfun/laws.hpp"
#include "dfun/operator_level.hpp"
#include "dfun/ops.hpp"
#include "dfun/random.hpp"
#include "dfun/solver.hpp"
#include "dfun/table_io.hpp"
