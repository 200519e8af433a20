#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace histwalk {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Probability distribution over lattice sites x in [-L, L] at step t.
// p(i) is the probability of site x = i - L.
struct Distribution {
    int t = 0;
    int L = 0;
    RealVector p;

    int site(int i) const { return i - L; }
    int index(int x) const { return x + L; }
    double at_site(int x) const { return p(x + L); }
    int size() const { return static_cast<int>(p.size()); }
};

// Scalar series indexed by t = 0..T (variance or fixed-site probability).
struct TimeSeries {
    std::vector<double> values;
    int x_star = 0;  // meaningful for probability series only
    std::map<std::string, std::string> meta;

    int length() const { return static_cast<int>(values.size()); }
};

// Quadratic fit sigma^2 ~ a t^2 + b t + c over t in [t_min, t_max].
struct QuadraticFit {
    double a = 0, b = 0, c = 0;
    double rss = 0;
    int t_min = 0, t_max = 0;
    bool converged = true;
};

// Power-law fit C(tau) ~ a + b tau^-gamma over the lag window.
struct PowerLawFit {
    double a = 0, b = 0, gamma = 0;
    double rss = 0;
    int tau_min = 0, tau_max = 0;
    bool even_only = true;
    bool converged = false;
    int iterations = 0;
};

}  // namespace histwalk
