#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "txpar/trace.hpp"

namespace txpar::test {

/// Account whose 20 bytes are all `name`, e.g. acct('A').
inline Account acct(char name) {
    std::array<std::uint8_t, 20> raw{};
    raw.fill(static_cast<std::uint8_t>(name));
    return Account(raw);
}

inline TxHash tx_hash(std::uint64_t block, std::uint64_t index) {
    std::array<std::uint8_t, 32> raw{};
    for (int b = 0; b < 8; ++b) {
        raw[b] = static_cast<std::uint8_t>(block >> (8 * b));
        raw[8 + b] = static_cast<std::uint8_t>(index >> (8 * b));
    }
    return TxHash(raw);
}

struct TxSpec {
    Gas gas;
    std::string_view accounts;  // one letter per account
};

/// Block with contiguous indices 0..n-1.
inline BlockTrace make_block(std::vector<TxSpec> txs, std::uint64_t number = 1) {
    BlockTrace b;
    b.block_number = number;
    for (std::size_t i = 0; i < txs.size(); ++i) {
        TransactionRecord r;
        r.hash = tx_hash(number, i);
        r.block_number = number;
        r.index = i;
        r.gas_used = txs[i].gas;
        for (const char c : txs[i].accounts) r.accounts.push_back(acct(c));
        std::sort(r.accounts.begin(), r.accounts.end());
        r.accounts.erase(std::unique(r.accounts.begin(), r.accounts.end()), r.accounts.end());
        b.transactions.push_back(std::move(r));
    }
    return b;
}

/// Random block over a small account universe so conflicts are common.
/// Each transaction touches 1..max_accounts distinct accounts out of `universe`.
inline BlockTrace random_block(std::mt19937_64& rng, std::size_t n, std::size_t universe, std::size_t max_accounts,
                               Gas max_gas, std::uint64_t number = 1) {
    BlockTrace b;
    b.block_number = number;
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < n; ++i) {
        TransactionRecord r;
        r.block_number = number;
        index += 1 + rng() % 3;  // gaps: indices need not be contiguous
        r.index = index;
        r.hash = tx_hash(number, index);
        r.gas_used = 1 + rng() % max_gas;
        const std::size_t k = 1 + rng() % max_accounts;
        for (std::size_t a = 0; a < k; ++a) r.accounts.push_back(acct(static_cast<char>('A' + rng() % universe)));
        std::sort(r.accounts.begin(), r.accounts.end());
        r.accounts.erase(std::unique(r.accounts.begin(), r.accounts.end()), r.accounts.end());
        b.transactions.push_back(std::move(r));
    }
    return b;
}

/// Brute-force pairwise intersection, independent of ConflictGraph.
inline bool share_account(const TransactionRecord& a, const TransactionRecord& b) {
    for (const auto& x : a.accounts) {
        for (const auto& y : b.accounts) {
            if (x == y) return true;
        }
    }
    return false;
}

}  // namespace txpar::test
