#include "txpar/cli.hpp"

#include <array>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "txpar/conflict_graph.hpp"
#include "txpar/dag.hpp"
#include "txpar/heft.hpp"
#include "txpar/oracle.hpp"
#include "txpar/report.hpp"
#include "txpar/synth.hpp"
#include "txpar/trace.hpp"

namespace txpar::cli {

namespace {

std::shared_ptr<spdlog::logger> logger() {
    if (auto existing = spdlog::get("txpar")) return existing;
    auto log = spdlog::stderr_logger_st("txpar");
    log->set_pattern("txpar: %l: %v");
    spdlog::level::level_enum level = spdlog::level::warn;
    if (const char* env = std::getenv("TXPAR_LOG")) {
        const std::string v = env;
        if (v == "debug") level = spdlog::level::debug;
        else if (v == "info") level = spdlog::level::info;
        else if (v == "warn") level = spdlog::level::warn;
    }
    log->set_level(level);
    return log;
}

// Input or output file failure; reported with exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputFile {
public:
    explicit InputFile(const std::string& path) {
        if (path == "-") {
            stream_ = &std::cin;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_) throw IoError("cannot open input " + path);
        stream_ = &file_;
    }
    std::istream& get() { return *stream_; }

private:
    std::ifstream file_;
    std::istream* stream_ = nullptr;
};

class OutputFile {
public:
    explicit OutputFile(const std::string& path) : path_(path) {
        if (path == "-") {
            stream_ = &std::cout;
            return;
        }
        file_.open(path, std::ios::binary | std::ios::trunc);
        if (!file_) throw IoError("cannot open output " + path);
        stream_ = &file_;
    }
    std::ostream& get() { return *stream_; }
    void close() {
        stream_->flush();
        if (!*stream_) throw IoError("write failed for " + path_);
        if (file_.is_open()) file_.close();
    }

private:
    std::string path_;
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

std::optional<std::size_t> parse_cap(const std::string& text) {
    if (text == "none") return std::nullopt;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || v == 0) throw CLI::ValidationError("--cap", "expected a positive integer or none");
    return static_cast<std::size_t>(v);
}

struct SimulateOptions {
    std::string input;
    std::string out = "-";
    std::uint32_t threads = 8;
    std::string cap = "none";
    std::string strategies = "lc,simple,heft";
    std::string simple_variant = "prefix";
    std::uint64_t window = 0;
    std::string aggregate_out;
    unsigned jobs = 1;
    std::string format = "csv";
    bool lenient = false;
    std::string dump_components;
    std::string dump_schedules;
};

struct Evaluated {
    BlockReport report;
    std::vector<ChunkSchedule> schedules;
    std::exception_ptr error;
};

// Evaluates a batch of blocks on `jobs` workers; results keep input order.
std::vector<Evaluated> evaluate_batch(const std::vector<BlockTrace>& blocks, const RunConfig& config,
                                      unsigned jobs, bool keep_schedules) {
    std::vector<Evaluated> out(blocks.size());
    auto work = [&](std::size_t k) {
        try {
            out[k].report = run_block(blocks[k], config, keep_schedules ? &out[k].schedules : nullptr);
        } catch (...) {
            out[k].error = std::current_exception();
        }
    };
    if (jobs <= 1 || blocks.size() <= 1) {
        for (std::size_t k = 0; k < blocks.size(); ++k) work(k);
        return out;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> workers;
        const unsigned n = std::min<std::size_t>(jobs, blocks.size());
        for (unsigned w = 0; w < n; ++w) {
            workers.emplace_back([&] {
                for (std::size_t k = next++; k < blocks.size(); k = next++) work(k);
            });
        }
    }
    return out;
}

int simulate(const SimulateOptions& opt) {
    auto log = logger();
    RunConfig config;
    config.threads = opt.threads;
    config.cap = parse_cap(opt.cap);
    config.strategies = parse_strategies(opt.strategies);
    config.simple_variant = *parse_simple_variant(opt.simple_variant);
    if (opt.window > 0 && opt.aggregate_out.empty()) {
        throw CLI::ValidationError("--window", "requires --aggregate-out");
    }
    log->info("simulate threads={} cap={} strategies={} simple_variant={} jobs={}", config.threads,
              cap_label(config.cap), opt.strategies, opt.simple_variant, opt.jobs);

    InputFile input(opt.input);
    OutputFile out(opt.out);
    std::optional<OutputFile> components_out, schedules_out;
    if (!opt.dump_components.empty()) components_out.emplace(opt.dump_components);
    if (!opt.dump_schedules.empty()) schedules_out.emplace(opt.dump_schedules);
    std::optional<Aggregator> aggregator;
    if (opt.window > 0) aggregator.emplace(opt.window);

    const bool csv = opt.format == "csv";
    if (csv) out.get() << csv_preamble(config) << csv_header();

    TraceReader reader(input.get(), ParseOptions{opt.lenient ? GasPolicy::lenient : GasPolicy::strict});
    const std::size_t batch_size = std::max<std::size_t>(1, std::size_t{opt.jobs} * 16);
    std::vector<BlockTrace> batch;
    std::size_t blocks_done = 0;
    bool more = true;
    while (more) {
        batch.clear();
        while (batch.size() < batch_size) {
            auto block = reader.next();
            if (!block) {
                more = false;
                break;
            }
            for (const auto& v : validate_block(*block)) {
                throw TraceError(0, fmt::format("block {}: {} at index {}", block->block_number, v.rule,
                                                v.index ? std::to_string(*v.index) : "-"));
            }
            batch.push_back(std::move(*block));
        }

        auto results = evaluate_batch(batch, config, opt.jobs, schedules_out.has_value());
        for (std::size_t k = 0; k < results.size(); ++k) {
            auto& r = results[k];
            if (r.error) std::rethrow_exception(r.error);
            if (r.report.skipped) log->warn("block {} is empty, skipped", r.report.block_number);
            out.get() << (csv ? csv_row(r.report) : json_row(r.report));
            if (aggregator) aggregator->add(r.report);
            if (components_out) {
                components_out->get() << "{\"block\":" << batch[k].block_number << ","
                                      << components_json(build_conflict_graph(batch[k])).substr(1) << "\n";
            }
            if (schedules_out) {
                for (const auto& cs : r.schedules) {
                    schedules_out->get() << fmt::format(
                        "{{\"block\":{},\"strategy\":\"{}\",\"chunk\":{},\"first_tx\":{},\"rows\":{}}}\n",
                        r.report.block_number, cs.strategy, cs.chunk, cs.first_position, schedule_json(cs.schedule));
                }
            }
        }
        out.get().flush();
        blocks_done += results.size();
    }
    out.close();
    if (components_out) components_out->close();
    if (schedules_out) schedules_out->close();

    if (aggregator) {
        OutputFile agg(opt.aggregate_out);
        agg.get() << csv_preamble(config) << aggregate_csv_header();
        for (const auto& a : aggregator->finish()) agg.get() << aggregate_csv_row(a);
        agg.close();
    }
    log->info("simulated {} blocks", blocks_done);
    return exit_ok;
}

struct GenerateOptions {
    std::string config;
    std::string out = "-";
    std::optional<std::uint64_t> seed, blocks, first_block, hot_contracts, users, gas_min, gas_max;
    std::optional<double> txs_per_block, gas_mu, gas_sigma, zipf_s, extra_touch_p, p_contract_call;
    bool print_config = false;
};

int generate(const GenerateOptions& opt) {
    SynthParams p;
    if (!opt.config.empty()) {
        std::ifstream in(opt.config, std::ios::binary);
        if (!in) throw IoError("cannot open config " + opt.config);
        std::stringstream text;
        text << in.rdbuf();
        p = parse_synth_config(text.str());
    }
    if (opt.seed) p.seed = *opt.seed;
    if (opt.blocks) p.blocks = *opt.blocks;
    if (opt.first_block) p.first_block = *opt.first_block;
    if (opt.hot_contracts) p.hot_contracts = *opt.hot_contracts;
    if (opt.users) p.users = *opt.users;
    if (opt.gas_min) p.gas_min = *opt.gas_min;
    if (opt.gas_max) p.gas_max = *opt.gas_max;
    if (opt.txs_per_block) p.txs_per_block = *opt.txs_per_block;
    if (opt.gas_mu) p.gas_mu = *opt.gas_mu;
    if (opt.gas_sigma) p.gas_sigma = *opt.gas_sigma;
    if (opt.zipf_s) p.zipf_s = *opt.zipf_s;
    if (opt.extra_touch_p) p.extra_touch_p = *opt.extra_touch_p;
    if (opt.p_contract_call) p.p_contract_call = *opt.p_contract_call;

    const SyntheticTraceGenerator gen(p);
    logger()->info("generate {}", to_json(gen.params()));
    if (opt.print_config) std::cerr << to_json(gen.params()) << "\n";

    OutputFile out(opt.out);
    for (std::uint64_t k = 0; k < p.blocks; ++k) {
        const BlockTrace b = gen.block(k);
        write_trace(out.get(), std::span(&b, 1));
    }
    out.close();
    return exit_ok;
}

struct OracleOptions {
    std::string input;
    std::string out = "-";
    std::uint32_t threads = 8;
    std::string simple_variant = "prefix";
    std::size_t max_tasks = 8;
    std::uint32_t max_threads = 3;
    bool lenient = false;
};

int oracle_check(const OracleOptions& opt) {
    InputFile input(opt.input);
    const auto blocks =
        parse_trace(input.get(), ParseOptions{opt.lenient ? GasPolicy::lenient : GasPolicy::strict});
    const auto variant = *parse_simple_variant(opt.simple_variant);
    const OracleLimits limits{opt.max_tasks, opt.max_threads};

    OutputFile out(opt.out);
    out.get() << "# threads=" << opt.threads << "\n";
    out.get() << "block,tx_count,optimal,heft,simple,explored,status\n";
    bool all_ok = true;
    for (const auto& block : blocks) {
        const auto graph = build_conflict_graph(block);
        const auto dag = build_dag(block, graph);
        OracleResult best;
        try {
            best = optimal_schedule(dag, opt.threads, limits);
        } catch (const OracleLimitError& e) {
            throw TraceError(0, fmt::format("block {}: {}", block.block_number, e.what()));
        }
        const auto heft = heft_schedule(dag, opt.threads);
        const auto simple = simple_schedule(block, graph, opt.threads, variant);
        for (const Schedule* s : std::array<const Schedule*, 3>{&best.witness, &heft, &simple}) {
            if (!check_valid(*s, block, graph).empty()) {
                throw InvariantViolation(fmt::format("invalid schedule for block {}", block.block_number));
            }
        }
        const bool ok = heft.makespan() >= best.optimal_makespan && simple.makespan() >= best.optimal_makespan &&
                        best.witness.makespan() == best.optimal_makespan;
        all_ok = all_ok && ok;
        out.get() << fmt::format("{},{},{},{},{},{},{}\n", block.block_number, block.size(), best.optimal_makespan,
                                 heft.makespan(), simple.makespan(), best.explored, ok ? "ok" : "FAIL");
    }
    out.close();
    return all_ok ? exit_ok : exit_internal;
}

int validate(const std::string& path, bool lenient) {
    InputFile input(path);
    const auto blocks = parse_trace(input.get(), ParseOptions{lenient ? GasPolicy::lenient : GasPolicy::strict});
    std::size_t violations = 0;
    std::size_t records = 0;
    for (const auto& block : blocks) {
        records += block.size();
        for (const auto& v : validate_block(block)) {
            ++violations;
            std::cout << fmt::format("block {} index {}: {}\n", block.block_number,
                                     v.index ? std::to_string(*v.index) : "-", v.rule);
        }
    }
    std::cout << fmt::format("{} blocks, {} transactions, {} violations\n", blocks.size(), records, violations);
    return violations == 0 ? exit_ok : exit_input;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Parallel execution potential of blockchain transaction traces"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Evaluate scheduling strategies on a trace");
    simulate_cmd->add_option("--input", sim.input, "Trace file (JSON Lines), - for stdin")->required();
    simulate_cmd->add_option("--out", sim.out, "Report destination, - for stdout")->capture_default_str();
    simulate_cmd->add_option("--threads", sim.threads, "Worker threads")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--cap", sim.cap, "Max transactions per scheduling run, or none")->capture_default_str();
    simulate_cmd->add_option("--strategies", sim.strategies, "Comma list of lc,simple,heft")->capture_default_str();
    simulate_cmd->add_option("--simple-variant", sim.simple_variant, "Batch rule of the simple scheduler")
        ->capture_default_str()
        ->check(CLI::IsMember({"prefix", "scan"}));
    simulate_cmd->add_option("--window", sim.window, "Aggregate speedups over windows of N blocks");
    simulate_cmd->add_option("--aggregate-out", sim.aggregate_out, "Destination of the windowed aggregate CSV");
    simulate_cmd->add_option("--jobs", sim.jobs, "Blocks evaluated concurrently")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--format", sim.format, "Report format")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    simulate_cmd->add_flag("--lenient", sim.lenient, "Clamp gasUsed 0 to 1 instead of rejecting it");
    simulate_cmd->add_option("--dump-components", sim.dump_components, "Write conflict components per block");
    simulate_cmd->add_option("--dump-schedules", sim.dump_schedules, "Write simple/HEFT Gantt rows per chunk");

    GenerateOptions gen;
    auto* generate_cmd = app.add_subcommand("generate", "Write a seeded synthetic trace");
    generate_cmd->add_option("--config", gen.config, "JSON file with generator parameters");
    generate_cmd->add_option("--out", gen.out, "Trace destination, - for stdout")->capture_default_str();
    generate_cmd->add_option("--seed", gen.seed);
    generate_cmd->add_option("--blocks", gen.blocks);
    generate_cmd->add_option("--first-block", gen.first_block);
    generate_cmd->add_option("--txs-per-block", gen.txs_per_block);
    generate_cmd->add_option("--gas-mu", gen.gas_mu);
    generate_cmd->add_option("--gas-sigma", gen.gas_sigma);
    generate_cmd->add_option("--gas-min", gen.gas_min);
    generate_cmd->add_option("--gas-max", gen.gas_max);
    generate_cmd->add_option("--hot-contracts", gen.hot_contracts);
    generate_cmd->add_option("--zipf-s", gen.zipf_s);
    generate_cmd->add_option("--users", gen.users);
    generate_cmd->add_option("--extra-touch-p", gen.extra_touch_p);
    generate_cmd->add_option("--p-contract-call", gen.p_contract_call);
    generate_cmd->add_flag("--print-config", gen.print_config, "Echo the effective parameters to stderr");

    OracleOptions orc;
    auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare HEFT and simple against the exact optimum");
    oracle_cmd->add_option("--input", orc.input, "Trace with small blocks")->required();
    oracle_cmd->add_option("--out", orc.out)->capture_default_str();
    oracle_cmd->add_option("--threads", orc.threads)->capture_default_str()->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--simple-variant", orc.simple_variant)
        ->capture_default_str()
        ->check(CLI::IsMember({"prefix", "scan"}));
    oracle_cmd->add_option("--max-tasks", orc.max_tasks)->capture_default_str();
    oracle_cmd->add_option("--max-threads", orc.max_threads)->capture_default_str();
    oracle_cmd->add_flag("--lenient", orc.lenient);

    std::string validate_input;
    bool validate_lenient = false;
    auto* validate_cmd = app.add_subcommand("validate", "Check a trace against the record invariants");
    validate_cmd->add_option("--input", validate_input)->required();
    validate_cmd->add_flag("--lenient", validate_lenient);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    auto log = logger();
    try {
        if (simulate_cmd->parsed()) return simulate(sim);
        if (generate_cmd->parsed()) return generate(gen);
        if (oracle_cmd->parsed()) return oracle_check(orc);
        if (validate_cmd->parsed()) return validate(validate_input, validate_lenient);
    } catch (const CLI::ParseError& e) {
        std::cerr << "txpar: " << e.what() << "\n";
        return exit_usage;
    } catch (const InvariantViolation& e) {
        log->critical("{}", e.what());
        return exit_internal;
    } catch (const TraceError& e) {
        log->error("{}", e.what());
        return exit_input;
    } catch (const InvalidParams& e) {
        log->error("{}", e.what());
        return exit_input;
    } catch (const IoError& e) {
        log->error("{}", e.what());
        return exit_input;
    }
    return exit_usage;
}

}  // namespace txpar::cli
