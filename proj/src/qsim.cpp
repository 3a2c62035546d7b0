#include "hqr/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "hqr/errors.hpp"

namespace hqr::qsim {

namespace {

std::size_t bit_of(unsigned qubit, unsigned n) { return std::size_t{1} << (n - 1 - qubit); }

// Index offsets of the 2^w local basis states relative to a base index with
// all target bits cleared, plus the mask of those bits.
struct Layout {
    std::vector<std::size_t> offsets;
    std::size_t mask = 0;
};

Layout layout_for(std::span<const unsigned> targets, unsigned n) {
    const std::size_t w = targets.size();
    Layout l;
    l.offsets.assign(std::size_t{1} << w, 0);
    for (std::size_t local = 0; local < l.offsets.size(); ++local)
        for (std::size_t j = 0; j < w; ++j)
            if ((local >> (w - 1 - j)) & 1u) l.offsets[local] |= bit_of(targets[j], n);
    for (unsigned q : targets) l.mask |= bit_of(q, n);
    return l;
}

// Applies m (or its complex conjugate) to the vector embedded in `data` at
// positions pos(i) = i * stride over basis indices i of an n-qubit register.
void apply_kernel(Complex* data, std::size_t stride, unsigned n, const Layout& l, const Matrix& m, bool conjugate) {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t local = l.offsets.size();
    std::vector<Complex> in(local);
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & l.mask) continue;
        for (std::size_t a = 0; a < local; ++a) in[a] = data[(base | l.offsets[a]) * stride];
        for (std::size_t r = 0; r < local; ++r) {
            Complex acc = 0.0;
            for (std::size_t c = 0; c < local; ++c) acc += (conjugate ? std::conj(m(r, c)) : m(r, c)) * in[c];
            data[(base | l.offsets[r]) * stride] = acc;
        }
    }
}

GateOp single(unsigned qubit, Complex a, Complex b, Complex c, Complex d) {
    return GateOp{Matrix{2, {a, b, c, d}}, {qubit}};
}

}  // namespace

Matrix Matrix::identity(std::size_t dim) {
    Matrix m{dim, std::vector<Complex>(dim * dim, 0.0)};
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const Complex> diag) {
    Matrix m{diag.size(), std::vector<Complex>(diag.size() * diag.size(), 0.0)};
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix m{dim, std::vector<Complex>(data.size())};
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.dim != b.dim) throw ShapeError("matrix dimensions differ");
    Matrix m{a.dim, std::vector<Complex>(a.data.size(), 0.0)};
    for (std::size_t r = 0; r < a.dim; ++r)
        for (std::size_t k = 0; k < a.dim; ++k)
            for (std::size_t c = 0; c < a.dim; ++c) m(r, c) += a(r, k) * b(k, c);
    return m;
}

double Matrix::unitarity_error() const {
    const Matrix p = adjoint() * (*this);
    double err = 0.0;
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) err = std::max(err, std::abs(p(r, c) - (r == c ? 1.0 : 0.0)));
    return err;
}

void GateOp::validate(unsigned n_qubits) const {
    if (targets.empty()) throw ShapeError("gate has no targets");
    if (unitary.dim != (std::size_t{1} << targets.size()) || unitary.data.size() != unitary.dim * unitary.dim)
        throw ShapeError("gate matrix is not 2^w x 2^w for w = " + std::to_string(targets.size()));
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] >= n_qubits)
            throw ShapeError("gate target " + std::to_string(targets[i]) + " outside a " + std::to_string(n_qubits) +
                             "-qubit register");
        for (std::size_t j = 0; j < i; ++j)
            if (targets[j] == targets[i]) throw ShapeError("gate targets repeat");
    }
}

GateOp hadamard(unsigned qubit) {
    const double s = 1.0 / std::sqrt(2.0);
    return single(qubit, s, s, s, -s);
}
GateOp pauli_x(unsigned qubit) { return single(qubit, 0.0, 1.0, 1.0, 0.0); }
GateOp pauli_y(unsigned qubit) { return single(qubit, 0.0, Complex(0, -1), Complex(0, 1), 0.0); }
GateOp pauli_z(unsigned qubit) { return single(qubit, 1.0, 0.0, 0.0, -1.0); }

GateOp diagonal_gate(std::span<const Complex> diag, unsigned first_qubit) {
    if (diag.size() < 2 || (diag.size() & (diag.size() - 1))) throw ShapeError("diagonal length must be 2^w");
    GateOp g{Matrix::diagonal(diag), {}};
    for (std::size_t s = diag.size(); s > 1; s >>= 1) g.targets.push_back(first_qubit + static_cast<unsigned>(g.targets.size()));
    return g;
}

QuantumState::QuantumState(unsigned n) : n_(n) {
    if (n == 0 || n > kMaxPureQubits)
        throw ShapeError("pure-state simulation supports 1.." + std::to_string(kMaxPureQubits) + " qubits");
    amps_.assign(std::size_t{1} << n, 0.0);
    amps_[0] = 1.0;
}

QuantumState QuantumState::basis(unsigned n, std::uint64_t index) {
    QuantumState s(n);
    if (index >= s.dim()) throw std::out_of_range("basis index outside register");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

QuantumState QuantumState::from_amplitudes(unsigned n, std::vector<Complex> amplitudes) {
    QuantumState s(n);
    if (amplitudes.size() != s.dim()) throw ShapeError("amplitude count is not 2^n");
    s.amps_ = std::move(amplitudes);
    if (std::abs(s.norm_squared() - 1.0) > 1e-12) throw std::invalid_argument("amplitudes are not normalized");
    return s;
}

double QuantumState::norm_squared() const {
    return std::accumulate(amps_.begin(), amps_.end(), 0.0, [](double acc, Complex a) { return acc + std::norm(a); });
}

DensityMatrix::DensityMatrix(unsigned n) : n_(n) {
    if (n == 0 || n > kMaxDensityQubits)
        throw ShapeError("density-matrix simulation supports 1.." + std::to_string(kMaxDensityQubits) + " qubits");
    rho_.assign(dim() * dim(), 0.0);
    rho_[0] = 1.0;
}

DensityMatrix::DensityMatrix(const QuantumState& pure) : DensityMatrix(pure.qubits()) {
    const auto& a = pure.amplitudes();
    for (std::size_t r = 0; r < dim(); ++r)
        for (std::size_t c = 0; c < dim(); ++c) rho_[r * dim() + c] = a[r] * std::conj(a[c]);
}

DensityMatrix DensityMatrix::from_entries(unsigned n, std::vector<Complex> entries) {
    DensityMatrix rho(n);
    if (entries.size() != rho.rho_.size()) throw ShapeError("density matrix entry count is not 4^n");
    rho.rho_ = std::move(entries);
    return rho;
}

Complex DensityMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) t += rho_[i * dim() + i];
    return t;
}

double DensityMatrix::hermiticity_error() const {
    double err = 0.0;
    for (std::size_t r = 0; r < dim(); ++r)
        for (std::size_t c = r; c < dim(); ++c)
            err = std::max(err, std::abs(rho_[r * dim() + c] - std::conj(rho_[c * dim() + r])));
    return err;
}

void NoiseModel::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarizing probability must lie in [0, 1]");
}

void apply_gate(QuantumState& state, const GateOp& gate) {
    gate.validate(state.qubits());
    apply_kernel(state.amplitudes().data(), 1, state.qubits(), layout_for(gate.targets, state.qubits()), gate.unitary,
                 false);
}

void apply_gate(DensityMatrix& rho, const GateOp& gate) {
    gate.validate(rho.qubits());
    const unsigned n = rho.qubits();
    const std::size_t d = rho.dim();
    const Layout l = layout_for(gate.targets, n);
    Complex* data = rho.entries().data();
    // U rho: U acts on the row index of every column.
    for (std::size_t c = 0; c < d; ++c) apply_kernel(data + c, d, n, l, gate.unitary, false);
    // (U rho) U^dagger: conj(U) acts on the column index of every row.
    for (std::size_t r = 0; r < d; ++r) apply_kernel(data + r * d, 1, n, l, gate.unitary, true);
}

void apply_depolarizing(DensityMatrix& rho, unsigned qubit, double p) {
    NoiseModel{p}.validate();
    if (qubit >= rho.qubits()) throw ShapeError("depolarizing target outside register");
    if (p == 0.0) return;
    // Sum over X, Y, Z of P rho P equals 2 Tr_q(rho) (x) I - rho, so entries
    // with equal target bits mix with their bit-flipped partner and the
    // others shrink by 1 - 4p/3.
    const std::size_t d = rho.dim();
    const std::size_t m = bit_of(qubit, rho.qubits());
    auto& e = rho.entries();
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            if (((r ^ c) & m) != 0) {
                e[r * d + c] *= 1.0 - 4.0 * p / 3.0;
            } else if ((r & m) == 0) {
                const std::size_t rf = r | m, cf = c | m;
                const Complex a = e[r * d + c], b = e[rf * d + cf];
                e[r * d + c] = (1.0 - 2.0 * p / 3.0) * a + (2.0 * p / 3.0) * b;
                e[rf * d + cf] = (1.0 - 2.0 * p / 3.0) * b + (2.0 * p / 3.0) * a;
            }
        }
    }
}

std::vector<double> measure_probabilities(const QuantumState& state) {
    std::vector<double> p(state.dim());
    std::transform(state.amplitudes().begin(), state.amplitudes().end(), p.begin(),
                   [](Complex a) { return std::norm(a); });
    return p;
}

std::vector<double> measure_probabilities(const DensityMatrix& rho) {
    std::vector<double> p(rho.dim());
    for (std::size_t i = 0; i < rho.dim(); ++i) p[i] = rho(i, i).real();
    return p;
}

std::vector<double> run_circuit(std::span<const GateOp> gates, unsigned n, const std::optional<NoiseModel>& noise) {
    if (!noise) {
        QuantumState state(n);
        for (const auto& g : gates) apply_gate(state, g);
        return measure_probabilities(state);
    }
    noise->validate();
    DensityMatrix rho(n);
    for (const auto& g : gates) {
        apply_gate(rho, g);
        for (unsigned q : g.targets) apply_depolarizing(rho, q, noise->p);
    }
    return measure_probabilities(rho);
}

std::vector<std::uint64_t> sample_counts(std::span<const double> probabilities, std::uint64_t shots,
                                         std::uint64_t seed) {
    std::vector<double> weights(probabilities.begin(), probabilities.end());
    for (auto& w : weights) w = std::max(w, 0.0);
    std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> counts(weights.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) ++counts[dist(rng)];
    return counts;
}

std::string bitstring(std::uint64_t index, unsigned n) {
    std::string s(n, '0');
    for (unsigned q = 0; q < n; ++q)
        if ((index >> (n - 1 - q)) & 1u) s[q] = '1';
    return s;
}

std::uint64_t index_of(std::string_view bits) {
    if (bits.empty() || bits.size() > 64) throw std::invalid_argument("bitstring must have 1..64 characters");
    std::uint64_t x = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("bitstring may only contain 0 and 1");
        x = (x << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return x;
}

void write_probabilities_csv(std::ostream& out, std::span<const double> probabilities, unsigned n) {
    const auto old = out.precision(17);
    for (std::size_t i = 0; i < probabilities.size(); ++i) out << bitstring(i, n) << ',' << probabilities[i] << '\n';
    out.precision(old);
}

}  // namespace hqr::qsim
