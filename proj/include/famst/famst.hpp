#pragma once

// Umbrella header for the library surface (everything except the CLI).

#include "famst/bridging.hpp"
#include "famst/connectivity.hpp"
#include "famst/error.hpp"
#include "famst/io/blobs.hpp"
#include "famst/io/csv.hpp"
#include "famst/io/matrix_file.hpp"
#include "famst/io/stats_file.hpp"
#include "famst/io/tree_file.hpp"
#include "famst/knn_exact.hpp"
#include "famst/neighbor_graph.hpp"
#include "famst/nn_descent.hpp"
#include "famst/pipeline.hpp"
#include "famst/point_set.hpp"
#include "famst/refinement.hpp"
#include "famst/spanning_tree.hpp"
#include "famst/union_find.hpp"
