#pragma once

#include "circuitflow/balance.hpp"
#include "circuitflow/binarize.hpp"
#include "circuitflow/bounds.hpp"
#include "circuitflow/circuit.hpp"
#include "circuitflow/degree.hpp"
#include "circuitflow/depth4.hpp"
#include "circuitflow/errors.hpp"
#include "circuitflow/field_eval.hpp"
#include "circuitflow/generators.hpp"
#include "circuitflow/homogenize.hpp"
#include "circuitflow/normalize.hpp"
#include "circuitflow/parse_trees.hpp"
#include "circuitflow/pass_report.hpp"
#include "circuitflow/pipeline.hpp"
#include "circuitflow/polynomial.hpp"
#include "circuitflow/report.hpp"
#include "circuitflow/ring.hpp"
#include "circuitflow/text_format.hpp"
