#pragma once

#include <stdexcept>
#include <string>

namespace lfikit {

// Base for every error the library raises on purpose. `code()` is stable and
// machine readable; the CLI maps it into its error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config_invalid", what) {}
};

struct AttemptBudgetExceeded : Error {
    explicit AttemptBudgetExceeded(const std::string& what)
        : Error("attempt_budget_exceeded", what) {}
};

struct AlignmentFailed : Error {
    AlignmentFailed(const std::string& what, int retries)
        : Error("alignment_failed", what), retries(retries) {}
    int retries;
};

struct FactorizationFailure : Error {
    explicit FactorizationFailure(const std::string& what)
        : Error("factorization_failure", what) {}
};

struct DegenerateEvidence : Error {
    explicit DegenerateEvidence(const std::string& what)
        : Error("degenerate_evidence", what) {}
};

struct UnphysicalParams : Error {
    explicit UnphysicalParams(const std::string& what)
        : Error("unphysical_params", what) {}
};

struct ParticleCollapse : Error {
    ParticleCollapse(const std::string& what, int step)
        : Error("particle_collapse", what), step(step) {}
    int step;
};

struct InitInvalid : Error {
    explicit InitInvalid(const std::string& what) : Error("init_invalid", what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error("io_error", what) {}
};

} // namespace lfikit
