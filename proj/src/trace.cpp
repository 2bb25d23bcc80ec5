#include "txpar/trace.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace txpar {

using nlohmann::json;

Gas BlockTrace::total_gas() const noexcept {
    Gas total = 0;
    for (const auto& tx : transactions) total += tx.gas_used;
    return total;
}

Gas BlockTrace::max_gas() const noexcept {
    Gas m = 0;
    for (const auto& tx : transactions) m = std::max(m, tx.gas_used);
    return m;
}

namespace {

std::uint64_t require_uint(const json& obj, const char* key, std::size_t line) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw TraceError(line, std::string("missing key \"") + key + "\"");
    if (!it->is_number_unsigned()) {
        throw TraceError(line, std::string("\"") + key + "\" must be a non-negative integer");
    }
    return it->get<std::uint64_t>();
}

const json& require(const json& obj, const char* key, std::size_t line) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw TraceError(line, std::string("missing key \"") + key + "\"");
    return *it;
}

template <typename Id>
Id parse_id(const json& value, const char* key, std::size_t line) {
    if (!value.is_string()) throw TraceError(line, std::string("\"") + key + "\" must be a string");
    try {
        return Id::from_hex(value.get_ref<const std::string&>());
    } catch (const std::invalid_argument& e) {
        throw TraceError(line, e.what());
    }
}

void sort_block(BlockTrace& block, const std::vector<std::size_t>& lines) {
    std::vector<std::size_t> order(block.transactions.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return block.transactions[a].index < block.transactions[b].index;
    });
    std::vector<TransactionRecord> sorted;
    sorted.reserve(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && block.transactions[order[k]].index == block.transactions[order[k - 1]].index) {
            const std::size_t line = std::max(lines[order[k]], lines[order[k - 1]]);
            throw TraceError(line, "duplicate (block " + std::to_string(block.block_number) +
                                       ", index " + std::to_string(block.transactions[order[k]].index) + ")");
        }
        sorted.push_back(std::move(block.transactions[order[k]]));
    }
    block.transactions = std::move(sorted);
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

TransactionRecord parse_record(std::string_view line, std::size_t line_number, const ParseOptions& options) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw TraceError(line_number, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) throw TraceError(line_number, "record must be a JSON object");

    TransactionRecord rec;
    rec.hash = parse_id<TxHash>(require(obj, "hash", line_number), "hash", line_number);
    rec.block_number = require_uint(obj, "block", line_number);
    rec.index = require_uint(obj, "index", line_number);
    rec.gas_used = require_uint(obj, "gasUsed", line_number);
    if (rec.gas_used == 0) {
        if (options.gas_policy == GasPolicy::strict) throw TraceError(line_number, "gasUsed must be >= 1");
        rec.gas_used = 1;
    }

    const json& accounts = require(obj, "accounts", line_number);
    if (!accounts.is_array()) throw TraceError(line_number, "\"accounts\" must be an array");
    rec.accounts.reserve(accounts.size());
    for (const auto& a : accounts) rec.accounts.push_back(parse_id<Account>(a, "accounts", line_number));
    std::sort(rec.accounts.begin(), rec.accounts.end());
    rec.accounts.erase(std::unique(rec.accounts.begin(), rec.accounts.end()), rec.accounts.end());
    return rec;
}

std::vector<BlockTrace> parse_trace(std::istream& in, const ParseOptions& options) {
    std::map<std::uint64_t, std::pair<BlockTrace, std::vector<std::size_t>>> blocks;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (is_blank(line)) continue;
        TransactionRecord rec = parse_record(line, line_number, options);
        auto& [block, lines] = blocks[rec.block_number];
        block.block_number = rec.block_number;
        block.transactions.push_back(std::move(rec));
        lines.push_back(line_number);
    }
    if (in.bad()) throw TraceError(0, "read error");

    std::vector<BlockTrace> out;
    out.reserve(blocks.size());
    for (auto& [number, entry] : blocks) {
        sort_block(entry.first, entry.second);
        out.push_back(std::move(entry.first));
    }
    return out;
}

TraceReader::TraceReader(std::istream& in, ParseOptions options) : in_(&in), options_(options) {}

std::optional<BlockTrace> TraceReader::next() {
    BlockTrace block;
    std::vector<std::size_t> lines;
    bool have_block = false;

    auto take = [&](TransactionRecord rec, std::size_t line) {
        if (!have_block) {
            if (finished_blocks_.contains(rec.block_number)) {
                throw TraceError(line, "records of block " + std::to_string(rec.block_number) +
                                           " are not contiguous");
            }
            block.block_number = rec.block_number;
            have_block = true;
        }
        block.transactions.push_back(std::move(rec));
        lines.push_back(line);
    };

    if (pending_) {
        take(std::move(*pending_), pending_line_);
        pending_.reset();
    }

    std::string line;
    while (std::getline(*in_, line)) {
        ++line_number_;
        if (is_blank(line)) continue;
        TransactionRecord rec = parse_record(line, line_number_, options_);
        if (have_block && rec.block_number != block.block_number) {
            pending_ = std::move(rec);
            pending_line_ = line_number_;
            break;
        }
        take(std::move(rec), line_number_);
    }
    if (in_->bad()) throw TraceError(0, "read error");
    if (!have_block) return std::nullopt;

    finished_blocks_.insert(block.block_number);
    sort_block(block, lines);
    return block;
}

void write_record(std::ostream& out, const TransactionRecord& record) {
    out << R"({"hash":")" << record.hash.hex() << R"(","block":)" << record.block_number
        << R"(,"index":)" << record.index << R"(,"gasUsed":)" << record.gas_used << R"(,"accounts":[)";
    for (std::size_t i = 0; i < record.accounts.size(); ++i) {
        if (i > 0) out << ',';
        out << '"' << record.accounts[i].hex() << '"';
    }
    out << "]}\n";
}

void write_trace(std::ostream& out, std::span<const BlockTrace> blocks) {
    for (const auto& block : blocks) {
        for (const auto& tx : block.transactions) write_record(out, tx);
    }
}

std::string to_jsonl(std::span<const BlockTrace> blocks) {
    std::ostringstream out;
    write_trace(out, blocks);
    return out.str();
}

std::vector<TraceViolation> validate_block(const BlockTrace& block) {
    std::vector<TraceViolation> out;
    std::unordered_set<std::uint64_t> seen;
    std::uint64_t highest = 0;
    for (std::size_t k = 0; k < block.transactions.size(); ++k) {
        const auto& tx = block.transactions[k];
        if (tx.block_number != block.block_number) out.push_back({tx.index, "block number mismatch"});
        if (tx.gas_used < 1) out.push_back({tx.index, "zero gasUsed"});
        if (tx.accounts.empty()) out.push_back({tx.index, "empty access list"});
        if (!std::is_sorted(tx.accounts.begin(), tx.accounts.end()) ||
            std::adjacent_find(tx.accounts.begin(), tx.accounts.end()) != tx.accounts.end()) {
            out.push_back({tx.index, "access list not normalized"});
        }
        if (!seen.insert(tx.index).second) {
            out.push_back({tx.index, "duplicate index"});
        } else if (k > 0 && tx.index < highest) {
            out.push_back({tx.index, "index order"});
        }
        highest = std::max(highest, tx.index);
    }
    return out;
}

}  // namespace txpar
