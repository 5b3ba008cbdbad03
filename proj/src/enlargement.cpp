#include "bsdelab/enlargement.hpp"

#include <cmath>
#include <stdexcept>

#include "bsdelab/rng.hpp"

namespace bsdelab {

namespace {
constexpr std::uint32_t kEnlargementStream = 1;
}

EnlargementVariable sample_enlargement(const std::vector<double>& atoms,
                                       const std::vector<double>& probabilities,
                                       int paths, std::uint64_t seed) {
    if (atoms.empty()) throw std::invalid_argument("sample_enlargement: atoms must be nonempty");
    if (atoms.size() != probabilities.size())
        throw std::invalid_argument("sample_enlargement: atoms/probabilities size mismatch");
    if (paths < 1) throw std::invalid_argument("sample_enlargement: paths must be >= 1");

    double mass = 0.0;
    for (double p : probabilities) {
        if (p < 0.0) throw std::invalid_argument("sample_enlargement: negative probability");
        mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-12)
        throw std::invalid_argument("sample_enlargement: probabilities must sum to 1");

    EnlargementVariable out;
    out.atoms = atoms;
    out.probabilities = probabilities;
    out.atom_index.resize(paths);

    const RandomField field(seed, kEnlargementStream);
    for (int m = 0; m < paths; ++m) {
        const double u = field.uniform(static_cast<std::uint32_t>(m), 0, 0);
        double cdf = 0.0;
        int pick = static_cast<int>(atoms.size()) - 1;
        for (std::size_t j = 0; j < probabilities.size(); ++j) {
            cdf += probabilities[j];
            if (u < cdf) {
                pick = static_cast<int>(j);
                break;
            }
        }
        out.atom_index[m] = pick;
    }
    return out;
}

} // namespace bsdelab
