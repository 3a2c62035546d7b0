#pragma once

// Dense state-vector and density-matrix simulation for a handful of qubits.
// Qubit 0 is the most significant bit of a basis index, so the bitstring of
// index x reads qubit 0 first.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hqr::qsim {

using Complex = std::complex<double>;

inline constexpr unsigned kMaxPureQubits = 12;
inline constexpr unsigned kMaxDensityQubits = 8;

/// Square complex matrix, row-major.
struct Matrix {
    std::size_t dim = 0;
    std::vector<Complex> data;

    static Matrix identity(std::size_t dim);
    static Matrix diagonal(std::span<const Complex> diag);

    Complex& operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }

    Matrix adjoint() const;
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    /// max |(U^dagger U - I)_{rc}|
    double unitarity_error() const;
};

struct GateOp {
    Matrix unitary;                 // 2^w x 2^w
    std::vector<unsigned> targets;  // w distinct qubits; targets[0] is the local MSB

    std::size_t width() const noexcept { return targets.size(); }
    /// Throws ShapeError on a dimension mismatch, repeated or out-of-range targets.
    void validate(unsigned n_qubits) const;
};

GateOp hadamard(unsigned qubit);
GateOp pauli_x(unsigned qubit);
GateOp pauli_y(unsigned qubit);
GateOp pauli_z(unsigned qubit);
/// Diagonal gate on consecutive qubits first..first+w-1 where 2^w = diag.size().
GateOp diagonal_gate(std::span<const Complex> diag, unsigned first_qubit);

class QuantumState {
public:
    /// |0...0>; throws ShapeError if n exceeds kMaxPureQubits.
    explicit QuantumState(unsigned n);
    static QuantumState basis(unsigned n, std::uint64_t index);
    /// Throws std::invalid_argument unless the amplitudes are normalized to 1e-12.
    static QuantumState from_amplitudes(unsigned n, std::vector<Complex> amplitudes);

    unsigned qubits() const noexcept { return n_; }
    std::size_t dim() const noexcept { return amps_.size(); }
    const std::vector<Complex>& amplitudes() const noexcept { return amps_; }
    std::vector<Complex>& amplitudes() noexcept { return amps_; }
    double norm_squared() const;

private:
    unsigned n_;
    std::vector<Complex> amps_;
};

class DensityMatrix {
public:
    /// |0...0><0...0|; throws ShapeError if n exceeds kMaxDensityQubits.
    explicit DensityMatrix(unsigned n);
    explicit DensityMatrix(const QuantumState& pure);
    /// No validation: also used to push arbitrary operators through channels.
    static DensityMatrix from_entries(unsigned n, std::vector<Complex> entries);

    unsigned qubits() const noexcept { return n_; }
    std::size_t dim() const noexcept { return std::size_t{1} << n_; }
    Complex operator()(std::size_t r, std::size_t c) const { return rho_[r * dim() + c]; }
    const std::vector<Complex>& entries() const noexcept { return rho_; }
    std::vector<Complex>& entries() noexcept { return rho_; }

    Complex trace() const;
    /// max |rho - rho^dagger|
    double hermiticity_error() const;

private:
    unsigned n_;
    std::vector<Complex> rho_;
};

struct NoiseModel {
    double p = 0.0;  // per-qubit depolarizing probability after each gate

    /// Throws std::invalid_argument unless 0 <= p <= 1.
    void validate() const;
};

void apply_gate(QuantumState& state, const GateOp& gate);
/// rho -> U rho U^dagger
void apply_gate(DensityMatrix& rho, const GateOp& gate);

/// rho -> (1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z) on one qubit.
void apply_depolarizing(DensityMatrix& rho, unsigned qubit, double p);

std::vector<double> measure_probabilities(const QuantumState& state);
std::vector<double> measure_probabilities(const DensityMatrix& rho);

/// Runs from |0...0>. Without noise the pure-state path is used; with noise
/// every qubit a gate touches is depolarized right after that gate.
std::vector<double> run_circuit(std::span<const GateOp> gates, unsigned n, const std::optional<NoiseModel>& noise = {});

/// Multinomial sample of `shots` measurements from an exact distribution.
std::vector<std::uint64_t> sample_counts(std::span<const double> probabilities, std::uint64_t shots,
                                         std::uint64_t seed);

std::string bitstring(std::uint64_t index, unsigned n);
std::uint64_t index_of(std::string_view bits);

/// "bitstring,probability" rows in index order.
void write_probabilities_csv(std::ostream& out, std::span<const double> probabilities, unsigned n);

}  // namespace hqr::qsim
