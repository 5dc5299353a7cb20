#pragma once

#include "tlt/common.hpp"
#include "tlt/grammar.hpp"
#include "tlt/lf.hpp"
#include "tlt/sketch.hpp"
#include "tlt/table.hpp"
#include "tlt/validate.hpp"
#include "tlt/exec.hpp"
#include "tlt/dataset.hpp"
#include "tlt/legacy.hpp"
#include "tlt/cs.hpp"
#include "tlt/search.hpp"
#include "tlt/eval.hpp"
#include "tlt/json_io.hpp"
