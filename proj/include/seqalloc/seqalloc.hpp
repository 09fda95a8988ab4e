#pragma once

#include "seqalloc/equilibria.hpp"
#include "seqalloc/errors.hpp"
#include "seqalloc/instance.hpp"
#include "seqalloc/json_io.hpp"
#include "seqalloc/mechanism.hpp"
#include "seqalloc/pareto.hpp"
#include "seqalloc/rational.hpp"
#include "seqalloc/stackelberg.hpp"
#include "seqalloc/types.hpp"
#include "seqalloc/utility.hpp"
