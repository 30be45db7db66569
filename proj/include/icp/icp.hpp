#ifndef ICP_ICP_HPP
#define ICP_ICP_HPP

// Umbrella header for the relaxation modulus-based ICP solver library.

#include "icp/common.hpp"
#include "icp/sparse_matrix.hpp"
#include "icp/dense_matrix.hpp"
#include "icp/matrix_market.hpp"
#include "icp/problem.hpp"
#include "icp/splitting.hpp"
#include "icp/solver.hpp"
#include "icp/convergence.hpp"
#include "icp/oracle.hpp"
#include "icp/generators.hpp"
#include "icp/io.hpp"

#endif  // ICP_ICP_HPP
