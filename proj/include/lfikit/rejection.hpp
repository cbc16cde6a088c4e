#pragma once

#include <cstdint>

#include "lfikit/model.hpp"
#include "lfikit/samples.hpp"

namespace lfikit {

// Plain rejection sampling: draw from the prior, simulate, keep proposals
// whose discrepancy is <= epsilon, until n_accept draws are kept. Acceptance
// slot i consumes rng.child(i), so output is independent of worker count and
// acceptance order is proposal order. Simulator calls are counted exactly
// (every attempt simulates).
//
// Throws AttemptBudgetExceeded when any slot uses up max_attempts proposals.
WeightedSample rejection_abc(const Model& model, std::size_t n_accept, double epsilon,
                             RngStream rng, std::uint64_t max_attempts = 10'000'000,
                             unsigned workers = 0);

// Nearest-neighbour variant: simulate exactly n_total pairs and keep the
// floor(n_total * accept_fraction) smallest discrepancies (at least 1), ties
// broken by draw order.
WeightedSample nn_rejection(const Model& model, std::size_t n_total,
                            double accept_fraction, RngStream rng,
                            unsigned workers = 0);

} // namespace lfikit
