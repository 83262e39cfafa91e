#pragma once

// Umbrella header for the consensus-svm library.

#include "consvm/admm.hpp"
#include "consvm/box_qp.hpp"
#include "consvm/config.hpp"
#include "consvm/csv.hpp"
#include "consvm/dataset.hpp"
#include "consvm/errors.hpp"
#include "consvm/experiments.hpp"
#include "consvm/linear.hpp"
#include "consvm/model_bank.hpp"
#include "consvm/parallel.hpp"
#include "consvm/rng.hpp"
#include "consvm/stability.hpp"
#include "consvm/svm.hpp"
#include "consvm/wpa.hpp"
