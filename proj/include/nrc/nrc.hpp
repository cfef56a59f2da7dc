#pragma once

#include "nrc/error.hpp"
#include "nrc/label.hpp"
#include "nrc/type.hpp"
#include "nrc/value.hpp"
#include "nrc/expr.hpp"
#include "nrc/trace.hpp"
#include "nrc/typing.hpp"
#include "nrc/eval.hpp"
#include "nrc/replay.hpp"
#include "nrc/pattern.hpp"
#include "nrc/expr_order.hpp"
#include "nrc/slice.hpp"
#include "nrc/parse.hpp"
#include "nrc/print.hpp"
#include "nrc/json_io.hpp"
#include "nrc/report.hpp"
#include "nrc/workloads.hpp"
