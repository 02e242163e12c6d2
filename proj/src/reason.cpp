#include "larsplus/reason.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>

#include "larsplus/acyclicity.hpp"
#include "larsplus/core.hpp"
#include "larsplus/rewrite.hpp"
#include "larsplus/syntax.hpp"

namespace larsplus::reason {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

std::set<uint32_t> head_predicates(const Program& p) {
    std::set<uint32_t> out;
    for (const auto& r : p.rules)
        for (const auto& h : r.head)
            if (h.form != LarsForm::Arith && h.atom.pred != top_pred()) out.insert(h.atom.pred);
    return out;
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

const char* to_string(Gate g) {
    switch (g) {
        case Gate::Lwa: return "lwa";
        case Gate::Tlwa: return "tlwa";
        case Gate::None: return "none";
    }
    return "none";
}

void validate_data_stream(const Program& p, const Stream& d) {
    std::set<uint32_t> heads = head_predicates(p);
    for (uint32_t pred : d.predicates())
        if (heads.count(pred))
            throw std::invalid_argument("stream predicate " + symbol_name(pred) +
                                        " occurs in a rule head; not a data stream");
    auto sig = syntax::infer_sorts(p, d);
    if (!sig.ok()) throw std::invalid_argument(syntax::describe(*sig.error));
}

// Arity consistency across the program and the stream. Streams over
// intensional predicates are accepted here: the pipeline is sound for any
// input stream, and extensionality is a modelling convention.
void validate_inputs(const Program& p, const Stream& d) {
    auto sig = syntax::infer_sorts(p, d);
    if (!sig.ok()) throw std::invalid_argument(syntax::describe(*sig.error));
}

Answer answer(const Program& p, const Stream& d, uint64_t t, const BCQ& q,
              const AnswerOptions& opts) {
    if (!d.in_timeline(t)) throw std::invalid_argument("query time outside timeline");
    validate_inputs(p, d);

    Answer out;
    if (acyclicity::is_lwa(p).acyclic)
        out.gate = Gate::Lwa;
    else if (acyclicity::is_tlwa(p, d.horizon).acyclic)
        out.gate = Gate::Tlwa;
    else
        out.gate = Gate::None;
    if (out.gate == Gate::None && opts.require_gate && !opts.fuel_explicit)
        throw GateRequiredError();

    auto start = std::chrono::steady_clock::now();
    uint64_t h = d.horizon;
    Program prog = rewrite::eliminate_diamond(rewrite::clip_windows(p, h));
    BCQ query = rewrite::eliminate_diamond(rewrite::clip_windows(q, h));

    std::map<uint32_t, size_t> extra = rewrite::predicate_arities(d);
    for (const auto& [pred, arity] : rewrite::predicate_arities(query)) extra.emplace(pred, arity);
    rewrite::RewriteOutput rw = rewrite::rewrite_program(prog, extra, query.max_window());
    chase::ExQuery exq = rewrite::rewrite_query(query, t);
    ExRuleSet rules = rewrite::prune_auxiliary(rw.rules, exq.atoms);

    FactSet f0 = rewrite::rewrite_stream(d);
    FactSet timeline = rewrite::rewrite_timeline(h, rules, exq.atoms);
    f0.insert(f0.end(), timeline.begin(), timeline.end());

    chase::ChaseOutcome outcome = chase::chase(rules, f0, opts.fuel);
    bool matched = chase::answer_bcq_on_facts(outcome.facts, exq);

    out.saturated = outcome.saturated;
    if (matched)
        out.verdict = Verdict::Yes;  // sound even on a chase prefix
    else
        out.verdict = outcome.saturated ? Verdict::No : Verdict::Unknown;
    out.stats.rounds = outcome.fuel_used;
    out.stats.facts = outcome.facts.size();
    out.stats.nulls = outcome.nulls_created;
    out.stats.ms = elapsed_ms(start);
    return out;
}

Stream least_model(const Program& p, const Stream& d) {
    for (const auto& r : p.rules)
        if (!r.existentials.empty())
            throw std::invalid_argument("the least-model oracle handles existential-free programs");
    validate_inputs(p, d);

    Stream model = d;
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<Term> universe = model.abstract_terms();
        for (const auto& r : p.rules) {
            bool out_of_scope = false;
            for (const auto& h : r.head)
                if (h.form == LarsForm::At && h.at.is_time_point() &&
                    !model.in_timeline(h.at.time))
                    out_of_scope = true;
            if (out_of_scope) continue;  // inference out of scope is ignored

            for (uint64_t t = 0; t <= model.horizon; ++t) {
                for (const Binding& sigma : core::find_matches(model, t, r.body, universe)) {
                    for (const auto& h : r.head) {
                        LarsAtom inst = apply_binding(h, sigma);
                        if (inst.atom.pred == top_pred()) continue;
                        uint64_t when = t;
                        if (inst.form == LarsForm::At) when = inst.at.time;
                        if (!model.contains(when, inst.atom)) {
                            model.add(when, inst.atom);
                            changed = true;
                        }
                    }
                }
            }
        }
    }
    return model;
}

bool oracle_answer(const Program& p, const Stream& d, uint64_t t, const BCQ& q) {
    if (!d.in_timeline(t)) throw std::invalid_argument("query time outside timeline");
    Stream model = least_model(p, d);
    return core::bcq_holds(model, t, q);
}

std::vector<Batch> batches_of(const Stream& s) {
    std::vector<Batch> out;
    out.reserve(s.horizon + 1);
    for (uint64_t t = 0; t <= s.horizon; ++t) {
        Batch b;
        b.time = t;
        const auto& atoms = s.at(t);
        b.facts.assign(atoms.begin(), atoms.end());
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<TickReport> run_pointwise(const Program& p, const std::vector<Batch>& batches,
                                      uint64_t window_len, uint64_t fuel) {
    if (window_len == 0) throw std::invalid_argument("buffer window must be positive");
    for (size_t i = 1; i < batches.size(); ++i)
        if (batches[i].time < batches[i - 1].time)
            throw std::invalid_argument("batches must arrive in nondecreasing time order");

    std::map<uint64_t, std::vector<NormalAtom>> arrived;
    std::vector<TickReport> reports;

    for (const Batch& batch : batches) {
        auto& bucket = arrived[batch.time];
        bucket.insert(bucket.end(), batch.facts.begin(), batch.facts.end());
        uint64_t tick = batch.time;

        auto start = std::chrono::steady_clock::now();
        uint64_t lo = tick + 1 >= window_len ? tick + 1 - window_len : 0;
        Stream buffer(tick - lo);
        for (auto it = arrived.lower_bound(lo); it != arrived.end() && it->first <= tick; ++it)
            for (const auto& a : it->second) buffer.add(it->first - lo, a);

        validate_inputs(p, buffer);
        Program prog = rewrite::eliminate_diamond(rewrite::clip_windows(p, buffer.horizon));
        rewrite::RewriteOutput rw =
            rewrite::rewrite_program(prog, rewrite::predicate_arities(buffer));
        ExRuleSet rules = rewrite::prune_auxiliary(rw.rules, {});
        FactSet f0 = rewrite::rewrite_stream(buffer);
        FactSet timeline = rewrite::rewrite_timeline(buffer.horizon, rules, {});
        f0.insert(f0.end(), timeline.begin(), timeline.end());

        chase::ChaseOutcome outcome = chase::chase(rules, f0, fuel);

        TickReport report;
        report.tick = tick;
        const std::string box_prefix = "box_";
        for (const auto& fact : outcome.facts) {
            const std::string& name = symbol_name(fact.pred);
            if (name.rfind(box_prefix, 0) != 0) continue;
            if (fact.args.size() < 2) continue;
            const Term& window = fact.args[fact.args.size() - 2];
            const Term& when = fact.args[fact.args.size() - 1];
            if (!(window.is_time_point() && window.time == 0)) continue;
            if (!(when.is_time_point() && when.time == buffer.horizon)) continue;
            std::string stem = name.substr(box_prefix.size());
            if (stem == "top") continue;
            NormalAtom user(intern_symbol(stem),
                            std::vector<Term>(fact.args.begin(), fact.args.end() - 2));
            report.derived.push_back(std::move(user));
        }
        std::sort(report.derived.begin(), report.derived.end(),
                  [](const NormalAtom& a, const NormalAtom& b) {
                      return render_atom(a) < render_atom(b);
                  });
        report.rounds = outcome.fuel_used;
        report.facts = outcome.facts.size();
        report.nulls = outcome.nulls_created;
        report.exhausted = !outcome.saturated;
        report.ms = elapsed_ms(start);
        reports.push_back(std::move(report));
    }
    return reports;
}

BeltScenario gen_belts(const BeltConfig& cfg) {
    for (double prob : {cfg.p1, cfg.p2, cfg.p3})
        if (prob < 0.0 || prob > 1.0) throw std::invalid_argument("probabilities must be in [0,1]");
    if (cfg.belts == 0) throw std::invalid_argument("need at least one belt");

    BeltScenario out;
    out.program_text =
        "belt(X) -> exists Y. bOpr(X,Y).\n"
        "in 5 some bSpeed(X,Y), slow(Y) -> exists Z. brkG(X,Z).\n"
        "in 3 always bTmp(X,Y), high(Y) -> exists Z. incId(Z,X).\n"
        "incId(Y,X), bOpr(X,Z) -> assign(Y,Z).\n"
        "in 3 always incId(Z,X) -> block(X).\n";

    std::mt19937_64 rng(cfg.seed);
    // Portable draws: the engine's output sequence is pinned by the standard,
    // the distribution adapters are not.
    auto chance = [&rng](double prob) {
        return (rng() >> 11) * 0x1.0p-53 < prob;
    };
    auto pick = [&rng](uint64_t n) { return rng() % n; };

    out.stream = Stream(cfg.horizon);
    Term slow_c = Term::constant("slow");
    Term ok_c = Term::constant("ok");

    std::vector<uint64_t> remaining(cfg.belts, 0);
    std::vector<uint64_t> episode_temp(cfg.belts, 0);
    std::vector<Term> belt_names;
    belt_names.reserve(cfg.belts);
    for (uint64_t i = 1; i <= cfg.belts; ++i)
        belt_names.push_back(Term::constant("b" + std::to_string(i)));

    for (uint64_t t = 0; t <= cfg.horizon; ++t) {
        out.stream.add(t, NormalAtom("high", {Term::constant("8")}));
        out.stream.add(t, NormalAtom("high", {Term::constant("9")}));
        out.stream.add(t, NormalAtom("slow", {slow_c}));
        for (uint64_t i = 0; i < cfg.belts; ++i) {
            const Term& belt = belt_names[i];
            out.stream.add(t, NormalAtom("belt", {belt}));
            out.stream.add(t, NormalAtom("bSpeed", {belt, chance(cfg.p1) ? slow_c : ok_c}));
            uint64_t temperature;
            if (remaining[i] == 0 && chance(cfg.p2)) {
                bool extended = chance(cfg.p3);
                remaining[i] = extended ? 4 + pick(3) : 1 + pick(3);
                // One reading per episode: the box window condition asks for
                // the same temperature tuple throughout.
                episode_temp[i] = 8 + pick(2);
                out.episodes.push_back(BeltEpisode{i + 1, t, remaining[i], extended});
            }
            if (remaining[i] > 0) {
                temperature = episode_temp[i];
                --remaining[i];
            } else {
                temperature = 1 + pick(7);
            }
            out.stream.add(t, NormalAtom("bTmp", {belt, Term::constant(std::to_string(temperature))}));
        }
    }
    return out;
}

}  // namespace larsplus::reason
