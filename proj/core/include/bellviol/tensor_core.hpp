#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "bellviol/errors.hpp"

namespace bellviol {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using cplx = std::complex<double>;

inline constexpr double hermiticity_tol = 1e-12;
inline constexpr double contraction_tol = 1e-9;      // observable norm may exceed 1 by this
inline constexpr double state_norm_tol = 1e-12;
inline constexpr double density_psd_tol = 1e-10;
inline constexpr double operator_herm_tol = 1e-10;   // joint Bell operator Hermiticity
inline constexpr double expectation_imag_tol = 1e-9;
inline constexpr std::size_t default_dim_budget = 4096;

// Joint Hilbert-space dimension ceiling. The environment variable
// BELLVIOL_BUDGET_DIM overrides the default; it is re-read on every call so
// tests can tighten the budget at runtime.
std::size_t dim_budget();

std::size_t joint_dim(const std::vector<int>& dims);

// Mixed-radix odometer, last index fastest. Returns false after the last
// combination wraps back to all zeros.
bool next_index(std::vector<int>& idx, const std::vector<int>& radix);

// Real coefficient tensor over N parties with settings[j] inputs for party j.
// Coefficients are stored row-major with party 1 slowest.
struct BellFunctional {
    std::vector<int> settings;
    std::vector<double> coeffs;

    int parties() const { return static_cast<int>(settings.size()); }
    std::size_t size() const { return coeffs.size(); }
    std::size_t flat_index(const std::vector<int>& idx) const;
    double at(const std::vector<int>& idx) const { return coeffs[flat_index(idx)]; }
    double& at(const std::vector<int>& idx) { return coeffs[flat_index(idx)]; }

    // Validates: at least two parties, positive setting counts, coefficient
    // count equal to the product of setting counts, all entries finite.
    static BellFunctional checked(std::vector<int> settings, std::vector<double> coeffs);
};

// Hermitian contraction (operator norm at most 1 + contraction_tol)
// standing in for a +-1-valued measurement.
struct Observable {
    Matrix m;

    int dim() const { return static_cast<int>(m.rows()); }

    static Observable checked(Matrix m);
};

// One list of observables per party; all observables of a party share its
// local dimension.
struct ObservableSet {
    std::vector<std::vector<Observable>> parties;

    std::vector<int> dims() const;
    std::vector<int> settings() const;

    static ObservableSet checked(std::vector<std::vector<Observable>> parties);
};

// Pure or mixed state on a tensor product of finite-dimensional factors.
struct QuantumState {
    std::vector<int> dims;
    bool pure = true;
    Vector psi;   // amplitudes when pure
    Matrix rho;   // density matrix when mixed

    std::size_t dim() const { return joint_dim(dims); }
    Matrix density() const;

    static QuantumState make_pure(std::vector<int> dims, Vector psi);
    static QuantumState make_mixed(std::vector<int> dims, Matrix rho);
};

Matrix kron(const Matrix& a, const Matrix& b);

// Joint Bell operator Sum_i T_i (A^1_{i_1} x ... x A^N_{i_N}). Refuses when
// the joint dimension exceeds dim_budget().
Matrix bell_operator(const BellFunctional& T, const ObservableSet& obs);

// Re tr(rho B). Writes a warning to stderr when |Im tr(rho B)| exceeds
// expectation_imag_tol, which signals a non-Hermitian operator upstream.
double expectation(const QuantumState& state, const Matrix& B);

// Same contraction evaluated index-by-index without assembling the joint
// operator; agrees with expectation(state, bell_operator(T, obs)).
double contracted_expectation(const BellFunctional& T, const ObservableSet& obs,
                              const QuantumState& state);

struct TracelessSplit {
    Matrix traceless;
    double alpha;   // tr(A)/dim, the removed identity component
};

// Splits A = A0 + alpha * I with tr(A0) = 0. A0 is not renormalized, so its
// norm may exceed 1; callers rescale when they need a contraction.
TracelessSplit make_traceless(const Matrix& a);

// Applies op on tensor factor `party` of a joint pure-state vector.
Vector apply_local(const Vector& v, const Matrix& op, int party,
                   const std::vector<int>& dims);

// Reduced density matrix of one party (pure input states).
Matrix reduced_density(const QuantumState& state, int party);

} // namespace bellviol
