#include "qst/chain_model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace qst {

ChainSpec ChainSpec::uniform(int n, double hopping) {
    ChainSpec spec;
    spec.length = n;
    spec.couplings.assign(n > 0 ? n - 1 : 0, hopping);
    spec.fields.assign(n > 0 ? n : 0, 0.0);
    spec.validate();
    return spec;
}

void ChainSpec::validate() const {
    if (length < 2)
        throw std::invalid_argument("ChainSpec: length must be >= 2, got " +
                                    std::to_string(length));
    if (couplings.size() != static_cast<std::size_t>(length - 1))
        throw std::invalid_argument("ChainSpec: expected " +
                                    std::to_string(length - 1) + " couplings");
    if (fields.size() != static_cast<std::size_t>(length))
        throw std::invalid_argument("ChainSpec: expected " +
                                    std::to_string(length) + " fields");
    for (double j : couplings)
        if (!(j > 0.0))
            throw std::invalid_argument(
                "ChainSpec: couplings must be strictly positive");
}

double ChainSpec::mean_coupling() const {
    double s = 0.0;
    for (double j : couplings) s += j;
    return s / static_cast<double>(couplings.size());
}

Eigen::MatrixXd build_single_excitation_hamiltonian(const ChainSpec& spec) {
    spec.validate();
    const int n = spec.length;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n - 1; ++i) {
        h(i, i + 1) = spec.couplings[i];
        h(i + 1, i) = spec.couplings[i];
    }
    for (int i = 0; i < n; ++i) h(i, i) = 2.0 * spec.fields[i];
    return h;
}

SpectralData spectral_decompose(const Eigen::MatrixXd& h1) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h1);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectral_decompose: eigensolver failed");
    return SpectralData{solver.eigenvalues(), solver.eigenvectors()};
}

SpectralData spectral_decompose(const ChainSpec& spec) {
    return spectral_decompose(build_single_excitation_hamiltonian(spec));
}

namespace {

void check_site(const SpectralData& sd, int site, const char* name) {
    if (site < 1 || site > sd.size())
        throw std::out_of_range(std::string("propagator_amplitude: ") + name +
                                " out of range");
}

}  // namespace

Complex propagator_amplitude(const SpectralData& sd, int m, int n, double t) {
    check_site(sd, m, "m");
    check_site(sd, n, "n");
    Complex f{0.0, 0.0};
    for (int k = 0; k < sd.size(); ++k) {
        const double v = sd.eigenvectors(m - 1, k) * sd.eigenvectors(n - 1, k);
        f += v * std::polar(1.0, -sd.eigenvalues(k) * t);
    }
    return f;
}

Eigen::MatrixXcd propagator(const SpectralData& sd, double t) {
    const int n = sd.size();
    Eigen::VectorXcd phases(n);
    for (int k = 0; k < n; ++k)
        phases(k) = std::polar(1.0, -sd.eigenvalues(k) * t);
    return sd.eigenvectors.cast<Complex>() * phases.asDiagonal() *
           sd.eigenvectors.transpose().cast<Complex>();
}

Eigen::VectorXcd propagate(const SpectralData& sd, const Eigen::VectorXcd& v,
                           double t) {
    Eigen::VectorXcd w = sd.eigenvectors.transpose().cast<Complex>() * v;
    for (int k = 0; k < sd.size(); ++k)
        w(k) *= std::polar(1.0, -sd.eigenvalues(k) * t);
    return sd.eigenvectors.cast<Complex>() * w;
}

ChainSpec sample_random_chain(const DisorderModel& dm, int n) {
    if (!(dm.base_coupling > 0.0))
        throw std::invalid_argument("DisorderModel: base coupling must be > 0");
    if (dm.spread < 0.0 || dm.spread >= 1.0)
        throw std::invalid_argument("DisorderModel: spread must be in [0,1)");
    ChainSpec spec;
    spec.length = n;
    spec.fields.assign(n, 0.0);
    spec.couplings.resize(n > 0 ? n - 1 : 0);
    if (dm.spread == 0.0) {
        std::fill(spec.couplings.begin(), spec.couplings.end(),
                  dm.base_coupling);
    } else {
        std::mt19937_64 rng(dm.seed);
        std::uniform_real_distribution<double> dist(
            dm.base_coupling * (1.0 - dm.spread),
            dm.base_coupling * (1.0 + dm.spread));
        for (double& j : spec.couplings) j = dist(rng);
    }
    spec.validate();
    return spec;
}

double uniform_chain_eigenvalue(int n, double hopping, int k) {
    return 2.0 * hopping *
           std::cos(static_cast<double>(k) * std::numbers::pi / (n + 1));
}

Complex uniform_chain_amplitude(int n, double hopping, int m, int site,
                                double t) {
    const double norm = 2.0 / (n + 1);
    Complex f{0.0, 0.0};
    for (int k = 1; k <= n; ++k) {
        const double arg = static_cast<double>(k) * std::numbers::pi / (n + 1);
        f += norm * std::sin(arg * m) * std::sin(arg * site) *
             std::polar(1.0, -uniform_chain_eigenvalue(n, hopping, k) * t);
    }
    return f;
}

}  // namespace qst
