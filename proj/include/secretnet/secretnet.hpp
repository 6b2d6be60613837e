#pragma once

#include "secretnet/chain.hpp"
#include "secretnet/common.hpp"
#include "secretnet/graph_io.hpp"
#include "secretnet/lattice.hpp"
#include "secretnet/oracle.hpp"
#include "secretnet/percolation.hpp"
#include "secretnet/rng.hpp"
#include "secretnet/secret_state.hpp"
#include "secretnet/union_find.hpp"
