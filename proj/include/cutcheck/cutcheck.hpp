#pragma once

#include "cutcheck/term.hpp"
#include "cutcheck/enumerate.hpp"
#include "cutcheck/parser.hpp"
#include "cutcheck/ld_tree.hpp"
#include "cutcheck/pruning.hpp"
#include "cutcheck/prolog_search.hpp"
#include "cutcheck/verdict.hpp"
#include "cutcheck/spec_sets.hpp"
#include "cutcheck/spec_file.hpp"
#include "cutcheck/solve.hpp"
#include "cutcheck/well_asserted.hpp"
#include "cutcheck/termination.hpp"
#include "cutcheck/verifier.hpp"
#include "cutcheck/dot.hpp"
#include "cutcheck/report.hpp"
