#pragma once

#include "tww/canonical.hpp"
#include "tww/error.hpp"
#include "tww/io.hpp"
#include "tww/kernel.hpp"
#include "tww/reduce.hpp"
#include "tww/sequence.hpp"
#include "tww/solver.hpp"
#include "tww/structure.hpp"
#include "tww/trigraph.hpp"
