#pragma once

// Incomplete multi-view spectral clustering: masked adaptive-neighbor graphs,
// cross-view similarity completion, perturbation-minimizing view weights and
// consensus-Laplacian spectral clustering.

#include "pic/common.hpp"
#include "pic/dataset.hpp"
#include "pic/similarity.hpp"
#include "pic/completion.hpp"
#include "pic/laplacian.hpp"
#include "pic/qp.hpp"
#include "pic/consensus.hpp"
#include "pic/spectral.hpp"
#include "pic/metrics.hpp"
#include "pic/pipeline.hpp"
#include "pic/synth.hpp"
#include "pic/run_record.hpp"
#include "pic/commands.hpp"
