#pragma once

#include "translog/core.hpp"
#include "translog/corpus.hpp"
#include "translog/desugar.hpp"
#include "translog/errors.hpp"
#include "translog/model_io.hpp"
#include "translog/parser.hpp"
#include "translog/semantics.hpp"
#include "translog/syntax.hpp"
#include "translog/transition.hpp"
