#pragma once

// Umbrella header for the emergence library: effective-information analysis
// of discrete causal structures, macroscale model search, and channel
// capacity comparison.

#include "emergence/capacity.hpp"
#include "emergence/dist.hpp"
#include "emergence/errors.hpp"
#include "emergence/fixtures.hpp"
#include "emergence/gate_network.hpp"
#include "emergence/io.hpp"
#include "emergence/measures.hpp"
#include "emergence/model_space.hpp"
#include "emergence/rng.hpp"
#include "emergence/search.hpp"
#include "emergence/tpm.hpp"
