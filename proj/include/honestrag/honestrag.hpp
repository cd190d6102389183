#pragma once

#include "honestrag/corpus.hpp"
#include "honestrag/dataset_prep.hpp"
#include "honestrag/embedding.hpp"
#include "honestrag/errors.hpp"
#include "honestrag/evaluate.hpp"
#include "honestrag/gateway.hpp"
#include "honestrag/pruner.hpp"
#include "honestrag/router.hpp"
#include "honestrag/scorer.hpp"
#include "honestrag/text.hpp"
#include "honestrag/types.hpp"
