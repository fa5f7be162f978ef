#pragma once

#include "binclust/baselines.hpp"
#include "binclust/binary_matrix.hpp"
#include "binclust/cluster_state.hpp"
#include "binclust/datagen.hpp"
#include "binclust/error.hpp"
#include "binclust/eval.hpp"
#include "binclust/io.hpp"
#include "binclust/model.hpp"
#include "binclust/preprocess.hpp"
#include "binclust/sampler.hpp"
