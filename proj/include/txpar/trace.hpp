#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "txpar/account.hpp"
#include "txpar/errors.hpp"

namespace txpar {

/// One transaction as observed during block execution.
struct TransactionRecord {
    TxHash hash;
    std::uint64_t block_number = 0;
    std::uint64_t index = 0;  // position in consensus order, not necessarily contiguous
    Gas gas_used = 1;
    std::vector<Account> accounts;  // sorted, deduplicated

    friend bool operator==(const TransactionRecord&, const TransactionRecord&) = default;
};

struct BlockTrace {
    std::uint64_t block_number = 0;
    std::vector<TransactionRecord> transactions;  // ascending index

    std::size_t size() const noexcept { return transactions.size(); }
    bool empty() const noexcept { return transactions.empty(); }
    Gas total_gas() const noexcept;
    Gas max_gas() const noexcept;

    friend bool operator==(const BlockTrace&, const BlockTrace&) = default;
};

enum class GasPolicy {
    strict,   // gasUsed == 0 is an input error
    lenient,  // gasUsed == 0 is clamped to 1
};

struct ParseOptions {
    GasPolicy gas_policy = GasPolicy::strict;
};

/// Parses one JSON Lines record. `line_number` is only used for error messages.
TransactionRecord parse_record(std::string_view line, std::size_t line_number,
                               const ParseOptions& options = {});

/// Reads a whole trace and groups it into blocks sorted by (block, index).
/// Lines may appear in any order. Blank lines are skipped.
std::vector<BlockTrace> parse_trace(std::istream& in, const ParseOptions& options = {});

/// Streaming reader yielding one block at a time in file order. The records
/// of a block must be contiguous in the stream; within a block any order is
/// accepted. Memory is bounded by the largest block.
class TraceReader {
public:
    explicit TraceReader(std::istream& in, ParseOptions options = {});

    std::optional<BlockTrace> next();

    std::size_t lines_read() const noexcept { return line_number_; }

private:
    std::istream* in_;
    ParseOptions options_;
    std::size_t line_number_ = 0;
    std::optional<TransactionRecord> pending_;
    std::size_t pending_line_ = 0;
    std::unordered_set<std::uint64_t> finished_blocks_;
};

void write_record(std::ostream& out, const TransactionRecord& record);
void write_trace(std::ostream& out, std::span<const BlockTrace> blocks);
std::string to_jsonl(std::span<const BlockTrace> blocks);

struct TraceViolation {
    std::optional<std::uint64_t> index;  // offending record, if any
    std::string rule;

    friend bool operator==(const TraceViolation&, const TraceViolation&) = default;
};

/// Checks the block and record invariants. An empty result means the block is
/// well-formed.
std::vector<TraceViolation> validate_block(const BlockTrace& block);

}  // namespace txpar
