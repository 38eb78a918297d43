#include "bellviol/tensor_core.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#include <Eigen/Eigenvalues>

namespace bellviol {

std::size_t dim_budget() {
    if (const char* env = std::getenv("BELLVIOL_BUDGET_DIM")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return default_dim_budget;
}

std::size_t joint_dim(const std::vector<int>& dims) {
    std::size_t d = 1;
    for (int k : dims) {
        if (k < 1) throw validation_error("party dimension must be positive");
        d *= static_cast<std::size_t>(k);
    }
    return d;
}

bool next_index(std::vector<int>& idx, const std::vector<int>& radix) {
    for (std::size_t j = idx.size(); j-- > 0;) {
        if (++idx[j] < radix[j]) return true;
        idx[j] = 0;
    }
    return false;
}

std::size_t BellFunctional::flat_index(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (std::size_t j = 0; j < settings.size(); ++j) {
        f = f * static_cast<std::size_t>(settings[j]) + static_cast<std::size_t>(idx[j]);
    }
    return f;
}

BellFunctional BellFunctional::checked(std::vector<int> settings, std::vector<double> coeffs) {
    if (settings.size() < 2) throw validation_error("functional needs at least two parties");
    std::size_t expect = 1;
    for (int m : settings) {
        if (m < 1) throw validation_error("every party needs at least one setting");
        expect *= static_cast<std::size_t>(m);
    }
    if (coeffs.size() != expect) {
        throw validation_error("coefficient count " + std::to_string(coeffs.size()) +
                               " does not match the settings product " + std::to_string(expect));
    }
    for (double c : coeffs) {
        if (!std::isfinite(c)) throw validation_error("coefficients must be finite");
    }
    BellFunctional T;
    T.settings = std::move(settings);
    T.coeffs = std::move(coeffs);
    return T;
}

Observable Observable::checked(Matrix m) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
        throw validation_error("observable must be a nonempty square matrix");
    }
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > hermiticity_tol) {
        throw validation_error("observable is not Hermitian (deviation " +
                               std::to_string(herm) + ")");
    }
    const double norm = m.operatorNorm();
    if (norm > 1.0 + contraction_tol) {
        throw validation_error("observable norm " + std::to_string(norm) +
                               " exceeds the contraction bound 1");
    }
    Observable a;
    a.m = std::move(m);
    return a;
}

std::vector<int> ObservableSet::dims() const {
    std::vector<int> d;
    d.reserve(parties.size());
    for (const auto& p : parties) d.push_back(p.front().dim());
    return d;
}

std::vector<int> ObservableSet::settings() const {
    std::vector<int> s;
    s.reserve(parties.size());
    for (const auto& p : parties) s.push_back(static_cast<int>(p.size()));
    return s;
}

ObservableSet ObservableSet::checked(std::vector<std::vector<Observable>> parties) {
    if (parties.empty()) throw validation_error("observable set needs at least one party");
    for (std::size_t j = 0; j < parties.size(); ++j) {
        if (parties[j].empty()) {
            throw validation_error("party " + std::to_string(j + 1) + " has no observables");
        }
        const int d = parties[j].front().dim();
        for (const auto& a : parties[j]) {
            if (a.dim() != d) {
                throw validation_error("party " + std::to_string(j + 1) +
                                       " mixes local dimensions");
            }
        }
    }
    ObservableSet set;
    set.parties = std::move(parties);
    return set;
}

Matrix QuantumState::density() const {
    if (pure) return psi * psi.adjoint();
    return rho;
}

QuantumState QuantumState::make_pure(std::vector<int> dims, Vector psi) {
    const std::size_t d = joint_dim(dims);
    if (static_cast<std::size_t>(psi.size()) != d) {
        throw validation_error("amplitude count does not match the dimension product");
    }
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > state_norm_tol) {
        throw validation_error("pure state norm deviates from 1 by " +
                               std::to_string(std::abs(norm - 1.0)));
    }
    QuantumState s;
    s.dims = std::move(dims);
    s.pure = true;
    s.psi = std::move(psi);
    return s;
}

QuantumState QuantumState::make_mixed(std::vector<int> dims, Matrix rho) {
    const std::size_t d = joint_dim(dims);
    if (static_cast<std::size_t>(rho.rows()) != d || static_cast<std::size_t>(rho.cols()) != d) {
        throw validation_error("density matrix shape does not match the dimension product");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > hermiticity_tol) {
        throw validation_error("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > density_psd_tol ||
        std::abs(rho.trace().imag()) > density_psd_tol) {
        throw validation_error("density matrix trace deviates from 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -density_psd_tol) {
        throw validation_error("density matrix has negative eigenvalue " +
                               std::to_string(eig.eigenvalues().minCoeff()));
    }
    QuantumState s;
    s.dims = std::move(dims);
    s.pure = false;
    s.rho = std::move(rho);
    return s;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix bell_operator(const BellFunctional& T, const ObservableSet& obs) {
    const int N = T.parties();
    if (N != static_cast<int>(obs.parties.size())) {
        throw validation_error("observable set has a different party count than the functional");
    }
    if (obs.settings() != T.settings) {
        throw validation_error("observable set settings do not match the functional");
    }
    const std::vector<int> dims = obs.dims();
    const std::size_t D = joint_dim(dims);
    if (D > dim_budget()) {
        throw validation_error("joint dimension " + std::to_string(D) +
                               " exceeds the budget " + std::to_string(dim_budget()) +
                               " (override with BELLVIOL_BUDGET_DIM)");
    }
    Matrix B = Matrix::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    std::vector<int> idx(static_cast<std::size_t>(N), 0);
    do {
        const double t = T.at(idx);
        if (t == 0.0) continue;
        Matrix term = obs.parties[0][static_cast<std::size_t>(idx[0])].m;
        for (int j = 1; j < N; ++j) {
            term = kron(term, obs.parties[static_cast<std::size_t>(j)]
                                  [static_cast<std::size_t>(idx[j])].m);
        }
        B += t * term;
    } while (next_index(idx, T.settings));
    return B;
}

double expectation(const QuantumState& state, const Matrix& B) {
    if (static_cast<std::size_t>(B.rows()) != state.dim() || B.rows() != B.cols()) {
        throw validation_error("operator shape does not match the state dimension");
    }
    cplx value;
    if (state.pure) {
        value = state.psi.dot(B * state.psi);   // Eigen's dot conjugates the left argument
    } else {
        value = (state.rho * B).trace();
    }
    if (std::abs(value.imag()) > expectation_imag_tol) {
        std::cerr << "bellviol: expectation has imaginary part " << value.imag()
                  << "; the operator is likely not Hermitian\n";
    }
    return value.real();
}

Vector apply_local(const Vector& v, const Matrix& op, int party,
                   const std::vector<int>& dims) {
    const int d = dims[static_cast<std::size_t>(party)];
    std::size_t left = 1, right = 1;
    for (int j = 0; j < party; ++j) left *= static_cast<std::size_t>(dims[static_cast<std::size_t>(j)]);
    for (std::size_t j = static_cast<std::size_t>(party) + 1; j < dims.size(); ++j) {
        right *= static_cast<std::size_t>(dims[j]);
    }
    Vector out = Vector::Zero(v.size());
    for (std::size_t l = 0; l < left; ++l) {
        const std::size_t base = l * static_cast<std::size_t>(d) * right;
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                const cplx w = op(a, b);
                if (w == cplx(0.0, 0.0)) continue;
                const std::size_t oa = base + static_cast<std::size_t>(a) * right;
                const std::size_t ob = base + static_cast<std::size_t>(b) * right;
                for (std::size_t r = 0; r < right; ++r) {
                    out[static_cast<Eigen::Index>(oa + r)] +=
                        w * v[static_cast<Eigen::Index>(ob + r)];
                }
            }
        }
    }
    return out;
}

namespace {

double contracted_expectation_pure(const BellFunctional& T, const ObservableSet& obs,
                                   const Vector& psi, const std::vector<int>& dims) {
    const int N = T.parties();
    double total = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(N), 0);
    do {
        const double t = T.at(idx);
        if (t == 0.0) continue;
        Vector chi = psi;
        for (int j = 0; j < N; ++j) {
            chi = apply_local(chi, obs.parties[static_cast<std::size_t>(j)]
                                       [static_cast<std::size_t>(idx[j])].m, j, dims);
        }
        total += t * psi.dot(chi).real();
    } while (next_index(idx, T.settings));
    return total;
}

} // namespace

double contracted_expectation(const BellFunctional& T, const ObservableSet& obs,
                              const QuantumState& state) {
    const std::vector<int> dims = obs.dims();
    if (dims != state.dims) {
        throw validation_error("observable dimensions do not match the state");
    }
    if (obs.settings() != T.settings) {
        throw validation_error("observable set settings do not match the functional");
    }
    if (state.pure) return contracted_expectation_pure(T, obs, state.psi, dims);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(state.rho);
    double total = 0.0;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
        const double p = eig.eigenvalues()(k);
        if (p < 1e-14) continue;
        total += p * contracted_expectation_pure(T, obs, eig.eigenvectors().col(k), dims);
    }
    return total;
}

TracelessSplit make_traceless(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw validation_error("traceless split needs a nonempty square matrix");
    }
    TracelessSplit split;
    split.alpha = a.trace().real() / static_cast<double>(a.rows());
    split.traceless = a - split.alpha * Matrix::Identity(a.rows(), a.cols());
    return split;
}

Matrix reduced_density(const QuantumState& state, int party) {
    if (party < 0 || party >= static_cast<int>(state.dims.size())) {
        throw validation_error("party index out of range");
    }
    if (!state.pure) throw validation_error("reduced_density expects a pure state");
    const int d = state.dims[static_cast<std::size_t>(party)];
    std::size_t left = 1, right = 1;
    for (int j = 0; j < party; ++j) left *= static_cast<std::size_t>(state.dims[static_cast<std::size_t>(j)]);
    for (std::size_t j = static_cast<std::size_t>(party) + 1; j < state.dims.size(); ++j) {
        right *= static_cast<std::size_t>(state.dims[j]);
    }
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t l = 0; l < left; ++l) {
        const std::size_t base = l * static_cast<std::size_t>(d) * right;
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                cplx acc(0.0, 0.0);
                const std::size_t oa = base + static_cast<std::size_t>(a) * right;
                const std::size_t ob = base + static_cast<std::size_t>(b) * right;
                for (std::size_t r = 0; r < right; ++r) {
                    acc += state.psi[static_cast<Eigen::Index>(oa + r)] *
                           std::conj(state.psi[static_cast<Eigen::Index>(ob + r)]);
                }
                out(a, b) += acc;
            }
        }
    }
    return out;
}

} // namespace bellviol
