#pragma once

// Umbrella header for the LDRANK toolkit: query-driven entity ranking on
// sparse RDF graphs with textual node data, plus the tensor-based triple
// selection and evaluation machinery around it.

#include "ldrank/bench.hpp"
#include "ldrank/consensus.hpp"
#include "ldrank/entity_graph.hpp"
#include "ldrank/errors.hpp"
#include "ldrank/eval.hpp"
#include "ldrank/io.hpp"
#include "ldrank/pagerank.hpp"
#include "ldrank/porter.hpp"
#include "ldrank/power.hpp"
#include "ldrank/priors.hpp"
#include "ldrank/prob.hpp"
#include "ldrank/sparse.hpp"
#include "ldrank/stopwords.hpp"
#include "ldrank/svd.hpp"
#include "ldrank/tensor.hpp"
#include "ldrank/text.hpp"
