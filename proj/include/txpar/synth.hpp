#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "txpar/trace.hpp"

namespace txpar {

/// Knobs of the synthetic workload. JSON config keys are the member names.
///
/// Each transaction touches a uniformly drawn sender, one target and a
/// geometric number of extra uniformly drawn user accounts (value transfer
/// recipients and the like). The target is a hot contract (Zipf-distributed
/// popularity) with probability p_contract_call, otherwise a user.
struct SynthParams {
    std::uint64_t blocks = 100;
    std::uint64_t first_block = 1;
    double txs_per_block = 120.0;  // Poisson mean; every block has at least one tx
    double gas_mu = 10.714;        // log-normal location, ln(45000)
    double gas_sigma = 0.9;
    Gas gas_min = 21000;
    Gas gas_max = 8000000;
    std::uint64_t hot_contracts = 200;
    double zipf_s = 1.1;
    std::uint64_t users = 100000;
    double extra_touch_p = 2.0 / 3.0;  // continuation probability; mean extras p/(1-p) = 2
    double p_contract_call = 0.6;
    std::uint64_t seed = 1;

    /// Throws InvalidParams.
    void validate() const;

    friend bool operator==(const SynthParams&, const SynthParams&) = default;
};

/// Missing keys keep their defaults; unknown keys are rejected. Throws
/// InvalidParams on bad JSON, bad types or invalid values.
SynthParams parse_synth_config(std::string_view json_text);
std::string to_json(const SynthParams& params);

/// Deterministic generator. Every block, and every transaction within it,
/// draws from its own mt19937_64 stream seeded by mixing (seed, block, slot),
/// so blocks can be generated in any order or in parallel with identical
/// output.
class SyntheticTraceGenerator {
public:
    explicit SyntheticTraceGenerator(SynthParams params);

    const SynthParams& params() const noexcept { return params_; }

    /// The k-th block (0-based), numbered first_block + k.
    BlockTrace block(std::uint64_t k) const;

    std::vector<BlockTrace> generate() const;

private:
    SynthParams params_;
    std::vector<double> zipf_cdf_;
};

inline std::vector<BlockTrace> generate(const SynthParams& params) {
    return SyntheticTraceGenerator(params).generate();
}

/// Address of the i-th hot contract / user in the synthetic account space.
Account synthetic_contract(std::uint64_t i);
Account synthetic_user(std::uint64_t i);

}  // namespace txpar
