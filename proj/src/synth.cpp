#include "txpar/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

namespace txpar {

namespace {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t block, std::uint64_t slot) {
    return mix64(mix64(mix64(seed) ^ block) ^ slot);
}

__extension__ using uint128 = unsigned __int128;

// Standard distributions are implementation-defined, so draws are derived
// from raw engine output here to keep traces identical across toolchains.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<uint128>(engine_()) * n) >> 64);
    }

    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t poisson(double mean) {
        std::uint64_t k = 0;
        double arrival = -std::log(1.0 - uniform());
        while (arrival < mean) {
            ++k;
            arrival -= std::log(1.0 - uniform());
        }
        return k;
    }

private:
    std::mt19937_64 engine_;
};

Account make_account(std::uint64_t tag, std::uint64_t i) {
    std::array<std::uint8_t, 20> raw{};
    for (std::size_t w = 0; w < 3; ++w) {
        const std::uint64_t h = mix64(mix64(tag) ^ (i * 3 + w));
        for (std::size_t b = 0; b < 8 && w * 8 + b < raw.size(); ++b) {
            raw[w * 8 + b] = static_cast<std::uint8_t>(h >> (8 * b));
        }
    }
    return Account(raw);
}

constexpr std::uint64_t contract_tag = 0xc0417ac7;
constexpr std::uint64_t user_tag = 0x05e5;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

Account synthetic_contract(std::uint64_t i) { return make_account(contract_tag, i); }
Account synthetic_user(std::uint64_t i) { return make_account(user_tag, i); }

void SynthParams::validate() const {
    if (!(txs_per_block > 0.0) || !std::isfinite(txs_per_block)) throw InvalidParams("txs_per_block must be > 0");
    if (!std::isfinite(gas_mu)) throw InvalidParams("gas_mu must be finite");
    if (!(gas_sigma >= 0.0) || !std::isfinite(gas_sigma)) throw InvalidParams("gas_sigma must be >= 0");
    if (gas_min < 1 || gas_min > gas_max) throw InvalidParams("need 1 <= gas_min <= gas_max");
    if (hot_contracts < 1) throw InvalidParams("hot_contracts must be >= 1");
    if (users < 1) throw InvalidParams("users must be >= 1");
    if (!(zipf_s > 0.0) || !std::isfinite(zipf_s)) throw InvalidParams("zipf_s must be > 0");
    if (!is_probability(extra_touch_p) || extra_touch_p >= 1.0) {
        throw InvalidParams("extra_touch_p must be in [0, 1)");
    }
    if (!is_probability(p_contract_call)) throw InvalidParams("p_contract_call must be in [0, 1]");
}

SynthParams parse_synth_config(std::string_view json_text) {
    SynthParams p;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidParams(std::string("synth config: ") + e.what());
    }
    if (!j.is_object()) throw InvalidParams("synth config must be a JSON object");

    auto read_uint = [&](const std::string& key, std::uint64_t& out) {
        const auto& v = j.at(key);
        if (!v.is_number_unsigned()) throw InvalidParams("synth config: " + key + " must be a non-negative integer");
        out = v.get<std::uint64_t>();
    };
    auto read_double = [&](const std::string& key, double& out) {
        const auto& v = j.at(key);
        if (!v.is_number()) throw InvalidParams("synth config: " + key + " must be a number");
        out = v.get<double>();
    };

    for (const auto& [key, value] : j.items()) {
        if (key == "blocks") read_uint(key, p.blocks);
        else if (key == "first_block") read_uint(key, p.first_block);
        else if (key == "txs_per_block") read_double(key, p.txs_per_block);
        else if (key == "gas_mu") read_double(key, p.gas_mu);
        else if (key == "gas_sigma") read_double(key, p.gas_sigma);
        else if (key == "gas_min") read_uint(key, p.gas_min);
        else if (key == "gas_max") read_uint(key, p.gas_max);
        else if (key == "hot_contracts") read_uint(key, p.hot_contracts);
        else if (key == "zipf_s") read_double(key, p.zipf_s);
        else if (key == "users") read_uint(key, p.users);
        else if (key == "extra_touch_p") read_double(key, p.extra_touch_p);
        else if (key == "p_contract_call") read_double(key, p.p_contract_call);
        else if (key == "seed") read_uint(key, p.seed);
        else throw InvalidParams("synth config: unknown key \"" + key + "\"");
    }
    p.validate();
    return p;
}

std::string to_json(const SynthParams& p) {
    nlohmann::ordered_json j;
    j["blocks"] = p.blocks;
    j["first_block"] = p.first_block;
    j["txs_per_block"] = p.txs_per_block;
    j["gas_mu"] = p.gas_mu;
    j["gas_sigma"] = p.gas_sigma;
    j["gas_min"] = p.gas_min;
    j["gas_max"] = p.gas_max;
    j["hot_contracts"] = p.hot_contracts;
    j["zipf_s"] = p.zipf_s;
    j["users"] = p.users;
    j["extra_touch_p"] = p.extra_touch_p;
    j["p_contract_call"] = p.p_contract_call;
    j["seed"] = p.seed;
    return j.dump();
}

SyntheticTraceGenerator::SyntheticTraceGenerator(SynthParams params) : params_(params) {
    params_.validate();
    zipf_cdf_.resize(params_.hot_contracts);
    double acc = 0.0;
    for (std::uint64_t k = 0; k < params_.hot_contracts; ++k) {
        acc += 1.0 / std::pow(static_cast<double>(k + 1), params_.zipf_s);
        zipf_cdf_[k] = acc;
    }
}

BlockTrace SyntheticTraceGenerator::block(std::uint64_t k) const {
    const auto& p = params_;
    BlockTrace b;
    b.block_number = p.first_block + k;

    // Slot 0 drives block-level draws, slot i+1 drives transaction i.
    Stream block_stream(stream_seed(p.seed, b.block_number, 0));
    const std::uint64_t n = std::max<std::uint64_t>(1, block_stream.poisson(p.txs_per_block));
    b.transactions.reserve(n);

    // The pick stays coupled across p_contract_call values: both candidates
    // are always drawn and the same uniform decides between them.
    auto pick = [&](Stream& s) {
        const double u = s.uniform();
        const double z = s.uniform() * zipf_cdf_.back();
        const std::uint64_t user = s.below(p.users);
        if (u < p.p_contract_call) {
            const auto it = std::upper_bound(zipf_cdf_.begin(), zipf_cdf_.end(), z);
            const auto idx = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(
                it - zipf_cdf_.begin(), static_cast<std::ptrdiff_t>(zipf_cdf_.size()) - 1));
            return synthetic_contract(idx);
        }
        return synthetic_user(user);
    };

    for (std::uint64_t i = 0; i < n; ++i) {
        Stream s(stream_seed(p.seed, b.block_number, i + 1));
        TransactionRecord tx;
        tx.block_number = b.block_number;
        tx.index = i;

        std::array<std::uint8_t, 32> hash{};
        for (std::size_t w = 0; w < 4; ++w) {
            const std::uint64_t bits = s.bits();
            for (std::size_t byte = 0; byte < 8; ++byte) hash[w * 8 + byte] = static_cast<std::uint8_t>(bits >> (8 * byte));
        }
        tx.hash = TxHash(hash);

        const double raw_gas = std::exp(p.gas_mu + p.gas_sigma * s.normal());
        const double clipped = std::clamp(raw_gas, static_cast<double>(p.gas_min), static_cast<double>(p.gas_max));
        tx.gas_used = static_cast<Gas>(std::llround(clipped));

        tx.accounts.push_back(synthetic_user(s.below(p.users)));
        tx.accounts.push_back(pick(s));
        while (s.uniform() < p.extra_touch_p) tx.accounts.push_back(synthetic_user(s.below(p.users)));

        std::sort(tx.accounts.begin(), tx.accounts.end());
        tx.accounts.erase(std::unique(tx.accounts.begin(), tx.accounts.end()), tx.accounts.end());
        b.transactions.push_back(std::move(tx));
    }
    return b;
}

std::vector<BlockTrace> SyntheticTraceGenerator::generate() const {
    std::vector<BlockTrace> out;
    out.reserve(params_.blocks);
    for (std::uint64_t k = 0; k < params_.blocks; ++k) out.push_back(block(k));
    return out;
}

}  // namespace txpar
