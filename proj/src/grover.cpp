#include "hqr/grover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hqr::grover {

namespace {

using qsim::Complex;
using qsim::GateOp;

constexpr double kPi = std::numbers::pi;

// Diagonal with value `marked` at local index `at` and 1 elsewhere, scaled by `scale`.
std::vector<Complex> marked_diagonal(std::size_t width, std::uint64_t at, Complex marked, Complex scale = 1.0) {
    std::vector<Complex> d(std::size_t{1} << width, scale);
    d[at] = scale * marked;
    return d;
}

void hadamard_layer(Circuit& c, unsigned first, unsigned width) {
    for (unsigned q = first; q < first + width; ++q) c.push_back(qsim::hadamard(q));
}

// One amplitude-amplification round on qubits first..first+width-1:
//   -H R_0(phase) H R_tau(phase)
// The leading minus sign is folded into the R_0 diagonal.
void amplify(Circuit& c, unsigned first, unsigned width, std::string_view tau, Complex phase) {
    c.push_back(qsim::diagonal_gate(marked_diagonal(width, qsim::index_of(tau), phase), first));
    hadamard_layer(c, first, width);
    c.push_back(qsim::diagonal_gate(marked_diagonal(width, 0, phase, -1.0), first));
    hadamard_layer(c, first, width);
}

double theta_for(unsigned n) { return std::asin(std::pow(2.0, -static_cast<double>(n) / 2.0)); }

}  // namespace

void TargetSpec::validate() const {
    if (n < 2) throw std::invalid_argument("search needs at least 2 qubits");
    if (tau.size() != n) throw std::invalid_argument("target '" + tau + "' is not " + std::to_string(n) + " bits");
    if (tau.find_first_not_of("01") != std::string::npos)
        throw std::invalid_argument("target may only contain 0 and 1");
}

TargetSpec TargetSpec::from_index(unsigned n, std::uint64_t index) {
    TargetSpec spec{n, qsim::bitstring(index, n)};
    if (n < 64 && index >> n) throw std::out_of_range("target index does not fit in n bits");
    spec.validate();
    return spec;
}

SubfunctionPlan partition(const TargetSpec& spec) {
    spec.validate();
    SubfunctionPlan plan;
    const unsigned count = spec.n / 2;
    for (unsigned i = 0; i < count; ++i) {
        const unsigned start = 2 * i;
        const unsigned width = i + 1 < count ? 2 : spec.n - start;
        plan.segments.push_back({start, width, spec.tau.substr(start, width)});
    }
    return plan;
}

GateOp phase_flip_oracle(std::string_view tau_i, unsigned first_qubit) {
    return phase_rotation_oracle(tau_i, kPi, first_qubit);
}

GateOp phase_rotation_oracle(std::string_view tau_i, double phi, unsigned first_qubit) {
    // e^{i pi} is formed exactly so the flip oracle is an exact involution.
    const Complex phase = phi == kPi ? Complex(-1.0, 0.0) : std::polar(1.0, phi);
    return qsim::diagonal_gate(marked_diagonal(tau_i.size(), qsim::index_of(tau_i), phase), first_qubit);
}

double compute_phi() {
    const double theta = std::asin(std::sqrt(1.0 / 8.0));
    const double j = std::floor((kPi / 2.0 - theta) / (2.0 * theta));
    return 2.0 * std::asin(std::sin(kPi / (4.0 * j + 6.0)) / std::sin(theta));
}

unsigned original_optimal_iterations(unsigned n) {
    return static_cast<unsigned>(std::lround(kPi / (4.0 * theta_for(n)) - 0.5));
}

ExactSchedule modified_schedule(unsigned n) {
    const double theta = theta_for(n);
    const unsigned j = static_cast<unsigned>(std::floor((kPi / 2.0 - theta) / (2.0 * theta))) + 1;
    return {j, 2.0 * std::asin(std::sin(kPi / (4.0 * j + 2.0)) / std::sin(theta))};
}

Circuit dega_circuit(const TargetSpec& spec) {
    const SubfunctionPlan plan = partition(spec);
    Circuit c;
    hadamard_layer(c, 0, spec.n);
    for (const auto& seg : plan.segments) {
        if (seg.width == 2) {
            amplify(c, seg.start, 2, seg.tau, -1.0);
        } else {
            const Complex phase = std::polar(1.0, compute_phi());
            amplify(c, seg.start, 3, seg.tau, phase);
            amplify(c, seg.start, 3, seg.tau, phase);
        }
    }
    return c;
}

Circuit grover_original_circuit(const TargetSpec& spec, std::optional<unsigned> iterations) {
    spec.validate();
    Circuit c;
    hadamard_layer(c, 0, spec.n);
    const unsigned rounds = iterations.value_or(original_optimal_iterations(spec.n));
    for (unsigned r = 0; r < rounds; ++r) amplify(c, 0, spec.n, spec.tau, -1.0);
    return c;
}

Circuit grover_modified_circuit(const TargetSpec& spec) {
    spec.validate();
    const ExactSchedule s = modified_schedule(spec.n);
    const Complex phase = std::polar(1.0, s.phi);
    Circuit c;
    hadamard_layer(c, 0, spec.n);
    for (unsigned r = 0; r < s.iterations; ++r) amplify(c, 0, spec.n, spec.tau, phase);
    return c;
}

std::uint64_t dega_oracle_calls(unsigned n) { return n / 2 + (n % 2); }

std::string_view variant_name(Variant v) noexcept {
    switch (v) {
    case Variant::Original: return "original";
    case Variant::Modified: return "modified";
    case Variant::Dega: return "dega";
    }
    return "?";
}

Circuit build_circuit(Variant variant, const TargetSpec& spec) {
    switch (variant) {
    case Variant::Original: return grover_original_circuit(spec);
    case Variant::Modified: return grover_modified_circuit(spec);
    case Variant::Dega: return dega_circuit(spec);
    }
    throw std::invalid_argument("unknown variant");
}

std::size_t gate_count(std::span<const qsim::GateOp> circuit) { return circuit.size(); }

double success_probability(Variant variant, const TargetSpec& spec, const std::optional<qsim::NoiseModel>& noise) {
    const Circuit c = build_circuit(variant, spec);
    return qsim::run_circuit(c, spec.n, noise)[spec.index()];
}

bool search_bucket(std::span<const std::uint8_t> membership, std::uint64_t lookup) {
    return DegaEngine().search(membership, lookup).found;
}

EngineResult DegaEngine::search(std::span<const std::uint8_t> membership, std::uint64_t lookup) {
    check_bucket_shape(membership, lookup);
    const unsigned n = static_cast<unsigned>(std::countr_zero(membership.size()));
    const auto probs = qsim::run_circuit(dega_circuit(TargetSpec::from_index(n, lookup)), n, noise_);
    const auto measured = static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
    return {measured == lookup && membership[measured] != 0, dega_oracle_calls(n)};
}

}  // namespace hqr::grover
