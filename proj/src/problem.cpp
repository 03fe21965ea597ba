#include "shieldot/problem.hpp"

#include <cmath>
#include <cstring>

namespace shieldot {

void ProblemInstance::validate() const {
    mu.validate();
    nu.validate();
    cost.validate();
    if (mu.mass_scale != nu.mass_scale) throw Error(ErrorKind::InvalidInput, "mu and nu use different mass_scale");
    if (mu.dim() != nu.dim()) throw Error(ErrorKind::InvalidInput, "mu and nu have different dimensions");
    if (cost_scale < 1) throw Error(ErrorKind::InvalidInput, "cost_scale must be at least 1");
    if (cost.is_sphere()) {
        if (mu.dim() != 3) throw Error(ErrorKind::InvalidInput, "sphere cost needs 3D unit vectors");
        for (const DiscreteMeasure* m : {&mu, &nu}) {
            for (std::size_t i = 0; i < m->size(); ++i) {
                const auto p = m->points[i];
                const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
                if (std::abs(norm - 1.0) > 1e-9) throw Error(ErrorKind::InvalidInput, "sphere cost needs unit-norm points");
            }
        }
    }
    if (cost.family == CostFamily::Noisy && cost.lambda != 0.0 && mu.dim() != 2) {
        throw Error(ErrorKind::InvalidInput, "lipschitz field needs 2D points");
    }
}

namespace {

struct Fnv {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    }
    template <class T>
    void value(const T& v) {
        bytes(&v, sizeof(T));
    }
    void measure(const DiscreteMeasure& m) {
        value(static_cast<std::int64_t>(m.dim()));
        value(static_cast<std::uint64_t>(m.size()));
        value(m.mass_scale);
        for (double c : m.points.coords()) value(c);
        for (Mass w : m.masses) value(w);
    }
};

}  // namespace

std::uint64_t problem_hash(const ProblemInstance& problem) {
    Fnv f;
    f.measure(problem.mu);
    f.measure(problem.nu);
    f.value(static_cast<std::int32_t>(problem.cost.family));
    f.value(problem.cost.p);
    f.value(problem.cost.eta);
    f.value(problem.cost.lambda);
    f.value(problem.cost.noise_seed);
    f.value(problem.cost_scale);
    return f.h;
}

}  // namespace shieldot
