#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "larsplus/acyclicity.hpp"
#include "larsplus/reason.hpp"
#include "larsplus/rewrite.hpp"
#include "larsplus/syntax.hpp"

namespace {

using json = nlohmann::json;
using namespace larsplus;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitUnknown = 3;

struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadInput("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Program load_program(const std::string& path) {
    auto parsed = syntax::parse_program(slurp(path));
    if (!parsed.ok()) throw BadInput(path + ":" + syntax::describe(*parsed.error));
    return std::move(*parsed.value);
}

Stream load_stream(const std::string& path) {
    auto parsed = syntax::parse_stream(slurp(path));
    if (!parsed.ok()) throw BadInput(path + ":" + syntax::describe(*parsed.error));
    return std::move(*parsed.value);
}

BCQ load_query(const std::string& text) {
    auto parsed = syntax::parse_query(text);
    if (!parsed.ok()) throw BadInput("query: " + syntax::describe(*parsed.error));
    return std::move(*parsed.value);
}

uint64_t parse_timeline_flag(const std::string& text) {
    auto sep = text.find("..");
    if (sep == std::string::npos) throw BadInput("timeline must look like L..H");
    try {
        uint64_t lo = std::stoull(text.substr(0, sep));
        uint64_t hi = std::stoull(text.substr(sep + 2));
        if (lo != 0) throw BadInput("timelines start at 0");
        return hi;
    } catch (const std::invalid_argument&) {
        throw BadInput("timeline must look like L..H");
    } catch (const std::out_of_range&) {
        throw BadInput("timeline bound out of range");
    }
}

json witness_json(const std::vector<acyclicity::Edge>& witness) {
    json out = json::array();
    for (const auto& e : witness)
        out.push_back({{"from", acyclicity::render_position(e.from)},
                       {"to", acyclicity::render_position(e.to)},
                       {"special", e.special}});
    return out;
}

uint64_t default_fuel() {
    if (const char* env = std::getenv("ELARS_FUEL")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw BadInput("ELARS_FUEL must be a natural number");
        }
    }
    return 10000;
}

int cmd_check(const std::string& program_path, const std::string& timeline) {
    Program p = load_program(program_path);
    json report;
    acyclicity::WaVerdict lwa = acyclicity::is_lwa(p);
    report["lwa"] = lwa.acyclic;
    if (!lwa.acyclic) report["lwaWitness"] = witness_json(lwa.witness);
    if (!timeline.empty()) {
        uint64_t h = parse_timeline_flag(timeline);
        acyclicity::WaVerdict tlwa = acyclicity::is_tlwa(p, h);
        report["tlwa"] = tlwa.acyclic;
        report["timeline"] = timeline;
        if (!tlwa.acyclic) report["tlwaWitness"] = witness_json(tlwa.witness);
    }
    std::cout << report.dump() << "\n";
    return kExitYes;
}

int cmd_ask(const std::string& program_path, const std::string& stream_path, uint64_t at,
            const std::string& query_text, uint64_t fuel, bool fuel_explicit, bool no_gate) {
    Program p = load_program(program_path);
    Stream d = load_stream(stream_path);
    BCQ q = load_query(query_text);

    reason::AnswerOptions opts;
    opts.fuel = fuel;
    opts.fuel_explicit = fuel_explicit;
    opts.require_gate = !no_gate;
    reason::Answer a = reason::answer(p, d, at, q, opts);

    json report;
    report["verdict"] = reason::to_string(a.verdict);
    report["gate"] = reason::to_string(a.gate);
    report["saturated"] = a.saturated;
    report["stats"] = {{"rounds", a.stats.rounds},
                       {"facts", a.stats.facts},
                       {"nulls", a.stats.nulls},
                       {"ms", a.stats.ms}};
    std::cout << report.dump() << "\n";
    switch (a.verdict) {
        case reason::Verdict::Yes: return kExitYes;
        case reason::Verdict::No: return kExitNo;
        case reason::Verdict::Unknown: return kExitUnknown;
    }
    return kExitUnknown;
}

int cmd_rewrite(const std::string& program_path, const std::string& stream_path,
                const std::string& timeline, const std::string& mode) {
    Program p = load_program(program_path);
    std::optional<Stream> d;
    if (!stream_path.empty()) d = load_stream(stream_path);

    std::optional<uint64_t> horizon;
    if (!timeline.empty())
        horizon = parse_timeline_flag(timeline);
    else if (d)
        horizon = d->horizon;

    if (mode == "tgrnd") {
        if (!horizon) throw BadInput("--mode tgrnd needs --timeline");
        ExRuleSet grounded = acyclicity::tfree(acyclicity::temporal_grounding(p, *horizon));
        std::cout << syntax::render_exrules(grounded);
        return kExitYes;
    }
    if (mode != "full") throw BadInput("--mode must be full or tgrnd");

    if (d) reason::validate_inputs(p, *d);
    if (horizon) p = rewrite::clip_windows(p, *horizon);
    Program prog = rewrite::eliminate_diamond(p);
    std::map<uint32_t, size_t> extra;
    if (d) extra = rewrite::predicate_arities(*d);
    rewrite::RewriteOutput rw = rewrite::rewrite_program(prog, extra);

    FactSet facts;
    if (d) {
        FactSet fd = rewrite::rewrite_stream(*d);
        facts.insert(facts.end(), fd.begin(), fd.end());
    }
    if (horizon) {
        FactSet ft = rewrite::rewrite_timeline(*horizon, rw.rules, {});
        facts.insert(facts.end(), ft.begin(), ft.end());
    }
    std::cout << syntax::render_exrules(rw.rules, facts);
    return kExitYes;
}

int cmd_run(const std::string& program_path, const std::string& stream_path, uint64_t window,
            uint64_t fuel) {
    Program p = load_program(program_path);
    Stream d = load_stream(stream_path);

    std::vector<reason::TickReport> reports =
        reason::run_pointwise(p, reason::batches_of(d), window, fuel);

    bool any_exhausted = false;
    std::vector<double> times;
    for (const auto& r : reports) {
        json line;
        line["tick"] = r.tick;
        json facts = json::array();
        for (const auto& a : r.derived) facts.push_back(render_atom(a));
        line["facts"] = std::move(facts);
        line["rounds"] = r.rounds;
        line["ms"] = r.ms;
        if (r.exhausted) {
            line["exhausted"] = true;
            any_exhausted = true;
        }
        std::cout << line.dump() << "\n";
        times.push_back(r.ms);
    }
    if (!times.empty()) {
        std::sort(times.begin(), times.end());
        std::cerr << "ticks=" << reports.size() << " median_ms=" << times[times.size() / 2]
                  << " max_ms=" << times.back() << "\n";
    }
    return any_exhausted ? kExitUnknown : kExitYes;
}

int cmd_gen_belts(uint64_t belts, uint64_t horizon, double p1, double p2, double p3, uint64_t seed,
                  const std::string& out_dir) {
    reason::BeltConfig cfg;
    cfg.belts = belts;
    cfg.horizon = horizon;
    cfg.p1 = p1;
    cfg.p2 = p2;
    cfg.p3 = p3;
    cfg.seed = seed;
    reason::BeltScenario scenario = reason::gen_belts(cfg);

    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir + "/sA.lars", std::ios::binary);
        if (!out) throw BadInput("cannot write " + out_dir + "/sA.lars");
        out << scenario.program_text;
    }
    {
        std::ofstream out(out_dir + "/sA.lstream", std::ios::binary);
        if (!out) throw BadInput("cannot write " + out_dir + "/sA.lstream");
        out << syntax::render_stream(scenario.stream);
    }
    std::cerr << "wrote " << out_dir << "/sA.lars and " << out_dir << "/sA.lstream ("
              << scenario.stream.fact_count() << " facts)\n";
    return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stream reasoning with existential rules: rewriting, chase, acyclicity gates"};
    app.require_subcommand(1);

    std::string program_path, stream_path, timeline, query_text, mode = "full", out_dir = ".";
    uint64_t at = 0, window = 6, fuel = 0;
    uint64_t belts = 100, horizon = 100, seed = 1;
    double p1 = 0.3, p2 = 0.3, p3 = 0.5;
    bool no_gate = false;

    CLI::App* check = app.add_subcommand("check", "acyclicity gates (LWA / TLWA)");
    check->add_option("--program", program_path)->required();
    check->add_option("--timeline", timeline);

    CLI::App* ask = app.add_subcommand("ask", "certain-answer query evaluation");
    ask->add_option("--program", program_path)->required();
    ask->add_option("--stream", stream_path)->required();
    ask->add_option("--at", at)->required();
    ask->add_option("--query", query_text)->required();
    auto* fuel_opt = ask->add_option("--fuel", fuel);
    ask->add_flag("--no-gate", no_gate);

    CLI::App* rewrite_cmd = app.add_subcommand("rewrite", "dump rewritten rules");
    rewrite_cmd->add_option("--program", program_path)->required();
    rewrite_cmd->add_option("--stream", stream_path);
    rewrite_cmd->add_option("--timeline", timeline);
    rewrite_cmd->add_option("--mode", mode)->check(CLI::IsMember({"full", "tgrnd"}));

    CLI::App* run = app.add_subcommand("run", "pointwise evaluation over a stream");
    run->add_option("--program", program_path)->required();
    run->add_option("--stream", stream_path)->required();
    run->add_option("--window", window)->required();
    auto* run_fuel_opt = run->add_option("--fuel", fuel);

    CLI::App* gen = app.add_subcommand("gen-belts", "generate the conveyor-belt scenario");
    gen->add_option("--belts", belts);
    gen->add_option("--horizon", horizon);
    gen->add_option("--p1", p1);
    gen->add_option("--p2", p2);
    gen->add_option("--p3", p3);
    gen->add_option("--seed", seed);
    gen->add_option("--out", out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return kExitBadInput;
    }

    try {
        if (app.got_subcommand(check)) return cmd_check(program_path, timeline);
        if (app.got_subcommand(ask)) {
            bool fuel_explicit = fuel_opt->count() > 0;
            if (!fuel_explicit) fuel = default_fuel();
            return cmd_ask(program_path, stream_path, at, query_text, fuel, fuel_explicit,
                           no_gate);
        }
        if (app.got_subcommand(rewrite_cmd))
            return cmd_rewrite(program_path, stream_path, timeline, mode);
        if (app.got_subcommand(run)) {
            if (run_fuel_opt->count() == 0) fuel = default_fuel();
            return cmd_run(program_path, stream_path, window, fuel);
        }
        if (app.got_subcommand(gen))
            return cmd_gen_belts(belts, horizon, p1, p2, p3, seed, out_dir);
    } catch (const BadInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const reason::GateRequiredError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
