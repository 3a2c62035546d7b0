#pragma once

// Grover-family searches for a single marked n-bit string tau:
//   original  - textbook phase flip + inversion about the mean
//   modified  - exact phase-matching search over all n qubits
//   dega      - distributed exact search: tau is split into floor(n/2)
//               segments of width 2 (the last is width 3 when n is odd),
//               each found exactly by a local 2- or 3-qubit search.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hqr/engine.hpp"
#include "hqr/qsim.hpp"

namespace hqr::grover {

struct TargetSpec {
    unsigned n = 2;
    std::string tau;  // n characters of '0'/'1', qubit 0 first

    /// Throws std::invalid_argument unless n >= 2 and tau is an n-bit string.
    void validate() const;
    std::uint64_t index() const { return qsim::index_of(tau); }
    static TargetSpec from_index(unsigned n, std::uint64_t index);
};

struct Segment {
    unsigned start = 0;  // first qubit
    unsigned width = 2;  // 2, or 3 for the final segment of odd n
    std::string tau;     // local target bits

    friend bool operator==(const Segment&, const Segment&) = default;
};

struct SubfunctionPlan {
    std::vector<Segment> segments;
};

SubfunctionPlan partition(const TargetSpec& spec);

/// Diagonal gate on qubits first..first+w-1 (w = tau_i.size()): -1 at tau_i.
qsim::GateOp phase_flip_oracle(std::string_view tau_i, unsigned first_qubit = 0);
/// Diagonal gate on qubits first..first+w-1: e^{i phi} at tau_i.
qsim::GateOp phase_rotation_oracle(std::string_view tau_i, double phi, unsigned first_qubit = 0);

/// Phase for the final 3-qubit stage: theta = asin(sqrt(1/8)),
/// J = floor((pi/2 - theta) / (2 theta)), phi = 2 asin(sin(pi/(4J+6)) / sin(theta)).
double compute_phi();

/// round(pi / (4 theta_n) - 1/2), theta_n = asin(2^{-n/2}).
unsigned original_optimal_iterations(unsigned n);

struct ExactSchedule {
    unsigned iterations = 0;  // floor((pi/2 - theta_n) / (2 theta_n)) + 1
    double phi = 0.0;         // 2 asin(sin(pi / (4 J + 2)) / sin(theta_n))
};
ExactSchedule modified_schedule(unsigned n);

using Circuit = std::vector<qsim::GateOp>;

Circuit dega_circuit(const TargetSpec& spec);
Circuit grover_original_circuit(const TargetSpec& spec, std::optional<unsigned> iterations = {});
Circuit grover_modified_circuit(const TargetSpec& spec);

/// Oracle applications made by each variant.
std::uint64_t dega_oracle_calls(unsigned n);

enum class Variant { Original, Modified, Dega };
std::string_view variant_name(Variant v) noexcept;
inline constexpr Variant kAllVariants[] = {Variant::Original, Variant::Modified, Variant::Dega};

Circuit build_circuit(Variant variant, const TargetSpec& spec);

/// Elementary gate count: every GateOp (single-qubit gates and w-wide
/// diagonal phase gates alike) counts as one.
std::size_t gate_count(std::span<const qsim::GateOp> circuit);

/// Exact probability of measuring tau after the variant's circuit.
double success_probability(Variant variant, const TargetSpec& spec,
                           const std::optional<qsim::NoiseModel>& noise = {});

/// Runs DEGA with tau = lookup over log2(k) qubits, takes the most likely
/// outcome and confirms classically that it is the lookup slot and occupied. Throws
/// std::logic_error for a malformed bucket.
bool search_bucket(std::span<const std::uint8_t> membership, std::uint64_t lookup);

class DegaEngine final : public BucketSearchEngine {
public:
    explicit DegaEngine(std::optional<qsim::NoiseModel> noise = {}) : noise_(noise) {}

    EngineResult search(std::span<const std::uint8_t> membership, std::uint64_t lookup) override;
    std::string_view name() const noexcept override { return "dega"; }

private:
    std::optional<qsim::NoiseModel> noise_;
};

}  // namespace hqr::grover
