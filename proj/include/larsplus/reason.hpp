#pragma once

#include <stdexcept>
#include <string>

#include "larsplus/chase.hpp"
#include "larsplus/lars.hpp"

namespace larsplus::reason {

enum class Verdict : uint8_t { Yes, No, Unknown };
enum class Gate : uint8_t { Lwa, Tlwa, None };

const char* to_string(Verdict v);
const char* to_string(Gate g);

struct AnswerStats {
    uint64_t rounds{0};
    uint64_t facts{0};
    uint64_t nulls{0};
    double ms{0.0};
};

struct Answer {
    Verdict verdict{Verdict::Unknown};
    Gate gate{Gate::None};
    bool saturated{false};
    AnswerStats stats;
};

struct AnswerOptions {
    uint64_t fuel{10000};
    bool require_gate{true};
    bool fuel_explicit{false};  // an explicit fuel bound overrides the gate requirement
};

// Raised when no acyclicity gate holds, gating is required, and no explicit
// fuel bound was given.
struct GateRequiredError : std::runtime_error {
    GateRequiredError()
        : std::runtime_error(
              "program is neither LWA nor TLWA on this timeline; pass an explicit fuel bound or "
              "disable gating") {}
};

// Rejects streams whose predicates occur in rule heads, and arity clashes.
void validate_data_stream(const Program& p, const Stream& d);

// Arity consistency only; streams over intensional predicates are accepted.
void validate_inputs(const Program& p, const Stream& d);

// End-to-end certain-answer query evaluation: gate check, clipping, diamond
// elimination, rewriting, chase, homomorphism. A saturated chase gives an
// exact verdict; a fuel-exhausted one can still soundly report yes.
Answer answer(const Program& p, const Stream& d, uint64_t t, const BCQ& q,
              const AnswerOptions& opts = {});

// Least model of an existential-free program over the data stream's timeline.
Stream least_model(const Program& p, const Stream& d);

// Reference decision procedure for existential-free programs.
bool oracle_answer(const Program& p, const Stream& d, uint64_t t, const BCQ& q);

struct Batch {
    uint64_t time{0};
    std::vector<NormalAtom> facts;
};

struct TickReport {
    uint64_t tick{0};
    std::vector<NormalAtom> derived;  // user-vocabulary facts at the tick
    uint64_t rounds{0};
    uint64_t facts{0};
    uint64_t nulls{0};
    double ms{0.0};
    bool exhausted{false};
};

// Evaluates the program over a sliding buffer of the last window_len ticks,
// re-indexed to a zero-based timeline; reports the per-tick derived slice.
std::vector<TickReport> run_pointwise(const Program& p, const std::vector<Batch>& batches,
                                      uint64_t window_len, uint64_t fuel);

// One batch per time point of the stream, in order (empty batches included).
std::vector<Batch> batches_of(const Stream& s);

struct BeltConfig {
    uint64_t belts{100};
    uint64_t horizon{100};
    double p1{0.3};  // slow speed per belt and tick
    double p2{0.3};  // high-temperature episode entry
    double p3{0.5};  // episode extended to >= 4 consecutive ticks
    uint64_t seed{1};
};

struct BeltEpisode {
    uint64_t belt{0};
    uint64_t start{0};
    uint64_t length{0};
    bool extended{false};
};

struct BeltScenario {
    std::string program_text;
    Stream stream;
    std::vector<BeltEpisode> episodes;
};

// Deterministic conveyor-belt scenario: five rules plus a generated stream.
BeltScenario gen_belts(const BeltConfig& cfg);

}  // namespace larsplus::reason
