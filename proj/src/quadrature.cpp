#include "tunnel/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace tunnel {

namespace {

struct Reference {
    std::vector<double> x, w;
};

Reference compute_reference(int n) {
    Reference r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = z;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = r.w[n - 1 - i] = w;
    }
    return r;
}

const Reference& reference(int n) {
    static std::mutex mtx;
    static std::map<int, Reference> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_reference(n)).first;
    return it->second;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
    const Reference& ref = reference(n);
    QuadratureRule q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        q.nodes[i] = mid + half * ref.x[i];
        q.weights[i] = half * ref.w[i];
    }
    return q;
}

QuadratureRule composite_gauss_legendre(int n, int panels, double a, double b) {
    if (panels < 1) throw std::invalid_argument("composite rule needs at least one panel");
    QuadratureRule q;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        QuadratureRule part = gauss_legendre(n, a + p * h, p + 1 == panels ? b : a + (p + 1) * h);
        q.nodes.insert(q.nodes.end(), part.nodes.begin(), part.nodes.end());
        q.weights.insert(q.weights.end(), part.weights.begin(), part.weights.end());
    }
    return q;
}

}  // namespace tunnel
