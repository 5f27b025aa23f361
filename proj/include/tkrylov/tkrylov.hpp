#pragma once

#include "imaging.hpp"
#include "io.hpp"
#include "krylov.hpp"
#include "operators.hpp"
#include "regularization.hpp"
#include "small_matrix.hpp"
#include "solvers.hpp"
#include "tensor.hpp"
#include "tproduct.hpp"
