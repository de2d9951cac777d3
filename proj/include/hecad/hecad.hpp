#pragma once

// Umbrella header for the adaptive anomaly-detection workbench.

#include "hecad/tier.hpp"

#include "hecad/nn/dense.hpp"
#include "hecad/nn/grad_check.hpp"
#include "hecad/nn/lstm.hpp"
#include "hecad/nn/mlp.hpp"
#include "hecad/nn/optimizer.hpp"
#include "hecad/nn/rng.hpp"
#include "hecad/nn/tensor.hpp"

#include "hecad/data/csv.hpp"
#include "hecad/data/scaler.hpp"
#include "hecad/data/splits.hpp"
#include "hecad/data/synthetic.hpp"
#include "hecad/data/timeseries.hpp"

#include "hecad/scoring/detection.hpp"
#include "hecad/scoring/gaussian.hpp"
#include "hecad/scoring/metrics.hpp"

#include "hecad/models/autoencoder.hpp"
#include "hecad/models/checkpoint.hpp"
#include "hecad/models/detector.hpp"
#include "hecad/models/seq2seq.hpp"
#include "hecad/models/seq2seq_train.hpp"

#include "hecad/sim/deployment.hpp"
#include "hecad/sim/deployment_io.hpp"
#include "hecad/sim/profile.hpp"
#include "hecad/sim/simulate.hpp"

#include "hecad/bandit/context.hpp"
#include "hecad/bandit/env.hpp"
#include "hecad/bandit/policy.hpp"
#include "hecad/bandit/policy_io.hpp"
#include "hecad/bandit/reward.hpp"
#include "hecad/bandit/train.hpp"

#include "hecad/schemes/evaluate.hpp"
#include "hecad/schemes/knn.hpp"

#include "hecad/pipeline.hpp"
