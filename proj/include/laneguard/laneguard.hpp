#pragma once

// Lane-wise highway traffic anomaly detection: wavelet + VQ-VAE deep branch,
// flow/occupancy rule branch, isolation-forest branch, calibration, fusion,
// synthetic benchmark generation and evaluation.

#include "laneguard/bundle.hpp"
#include "laneguard/config.hpp"
#include "laneguard/core.hpp"
#include "laneguard/fusion.hpp"
#include "laneguard/iforest.hpp"
#include "laneguard/io.hpp"
#include "laneguard/metrics.hpp"
#include "laneguard/mlbranch.hpp"
#include "laneguard/nn.hpp"
#include "laneguard/parallel.hpp"
#include "laneguard/pipeline.hpp"
#include "laneguard/rng.hpp"
#include "laneguard/rules.hpp"
#include "laneguard/stats.hpp"
#include "laneguard/synth.hpp"
#include "laneguard/thresholds.hpp"
#include "laneguard/vqvae.hpp"
#include "laneguard/wavelet.hpp"
