#pragma once

/// Umbrella header: SimRank scores on directed graphs in near-linear time
/// via iterative estimation of the SimRank diagonal (inexact GMRES over a
/// thresholded truncated-series matvec) and Neumann-series query
/// evaluation.

#include "idesim/diag_file.hpp"
#include "idesim/diagonal.hpp"
#include "idesim/error.hpp"
#include "idesim/eval.hpp"
#include "idesim/graph.hpp"
#include "idesim/oracle.hpp"
#include "idesim/queries.hpp"
#include "idesim/random.hpp"
#include "idesim/sparse.hpp"
