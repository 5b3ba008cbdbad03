#include "bsdelab/regression.hpp"

#include <cmath>

#include "bsdelab/errors.hpp"
#include "bsdelab/parallel.hpp"

namespace bsdelab {

NodeRegression::NodeRegression(const Scenario& scen, const RegressionBasis& basis,
                               int node, int jobs)
    : scen_(scen), node_(node), jobs_(jobs) {
    const int M = scen.path_count();
    const bool on_forward = basis.use_forward_state && scen.has_forward();
    const int state_dim = on_forward ? scen.forward().state_dim : scen.dim();

    std::vector<const ExtraFeature*> active;
    for (const auto& f : basis.extras)
        if (node >= f.from_node) active.push_back(&f);

    n_features_ = 1 + basis.poly_degree * state_dim + static_cast<int>(active.size());
    features_.resize(static_cast<std::size_t>(M) * n_features_);

    // Strata: enlargement atoms crossed with the optional event (active from
    // the event's node onward; before that all paths share the event stratum).
    int atom_count = 1;
    if (basis.stratify_by_atom && scen.has_enlargement())
        atom_count = scen.enlargement().atom_count();
    const bool event_active = basis.stratify_event.has_value() &&
                              (basis.stratify_event->node < 0 || node >= basis.stratify_event->node);
    const int event_count = event_active ? 2 : 1;
    n_strata_ = atom_count * event_count;
    stratum_.resize(M);

    for_each_block(M, jobs_, [&](int, int begin, int end) {
        for (int m = begin; m < end; ++m) {
            const PathView v = scen.view(m);
            double* row = features_.data() + static_cast<std::size_t>(m) * n_features_;
            int idx = 0;
            row[idx++] = 1.0;
            for (int j = 0; j < state_dim; ++j) {
                const double s = on_forward ? v.x(node, j) : v.w(node, j);
                double pw = 1.0;
                for (int p = 0; p < basis.poly_degree; ++p) {
                    pw *= s;
                    row[idx++] = pw;
                }
            }
            for (const ExtraFeature* f : active) row[idx++] = f->eval(v, node);

            int s_id = 0;
            if (atom_count > 1) s_id = scen.enlargement().atom_index[m];
            if (event_active)
                s_id = s_id * 2 + (basis.stratify_event->indicator[m] ? 1 : 0);
            stratum_[m] = s_id;
        }
    });
}

namespace {

// Cholesky with pivot-threshold column dropping. Zero-variance or collinear
// columns get coefficient 0; the constant column is never dropped for a
// nonempty stratum. Returns false only if even the constant pivot collapses.
struct CholeskySolve {
    std::vector<double> lower;  // B x B, row-major
    std::vector<bool> kept;
    int dropped = 0;
    double condition = 1.0;

    bool factor(const std::vector<double>& gram, int B) {
        lower.assign(static_cast<std::size_t>(B) * B, 0.0);
        kept.assign(B, true);
        double max_diag = 0.0;
        for (int i = 0; i < B; ++i)
            max_diag = std::max(max_diag, gram[static_cast<std::size_t>(i) * B + i]);
        const double tol = std::max(max_diag, 1.0) * 1e-12;
        double min_pivot = 0.0, max_pivot = 0.0;
        for (int i = 0; i < B; ++i) {
            double d = gram[static_cast<std::size_t>(i) * B + i];
            for (int k = 0; k < i; ++k) {
                const double lik = lower[static_cast<std::size_t>(i) * B + k];
                d -= lik * lik;
            }
            if (d <= tol) {
                if (i == 0) return false;
                kept[i] = false;
                ++dropped;
                lower[static_cast<std::size_t>(i) * B + i] = 1.0; // inert pivot
                for (int j = i + 1; j < B; ++j)
                    lower[static_cast<std::size_t>(j) * B + i] = 0.0;
                continue;
            }
            const double di = std::sqrt(d);
            lower[static_cast<std::size_t>(i) * B + i] = di;
            if (min_pivot == 0.0) min_pivot = d;
            min_pivot = std::min(min_pivot, d);
            max_pivot = std::max(max_pivot, d);
            for (int j = i + 1; j < B; ++j) {
                double s = gram[static_cast<std::size_t>(j) * B + i];
                for (int k = 0; k < i; ++k)
                    s -= lower[static_cast<std::size_t>(j) * B + k] *
                         lower[static_cast<std::size_t>(i) * B + k];
                lower[static_cast<std::size_t>(j) * B + i] = kept[i] ? s / di : 0.0;
            }
        }
        condition = (min_pivot > 0.0) ? max_pivot / min_pivot : 1.0;
        return true;
    }

    // Solves L L^T beta = rhs honoring dropped columns.
    std::vector<double> solve(std::vector<double> rhs) const {
        const int B = static_cast<int>(kept.size());
        for (int i = 0; i < B; ++i) {
            if (!kept[i]) {
                rhs[i] = 0.0;
                continue;
            }
            double s = rhs[i];
            for (int k = 0; k < i; ++k)
                if (kept[k]) s -= lower[static_cast<std::size_t>(i) * B + k] * rhs[k];
            rhs[i] = s / lower[static_cast<std::size_t>(i) * B + i];
        }
        for (int i = B - 1; i >= 0; --i) {
            if (!kept[i]) {
                rhs[i] = 0.0;
                continue;
            }
            double s = rhs[i];
            for (int k = i + 1; k < B; ++k)
                if (kept[k]) s -= lower[static_cast<std::size_t>(k) * B + i] * rhs[k];
            rhs[i] = s / lower[static_cast<std::size_t>(i) * B + i];
        }
        return rhs;
    }
};

} // namespace

std::vector<double> NodeRegression::fit(std::span<const double> target,
                                        RegressionDiagnostics* diag) const {
    const int M = scen_.path_count();
    const int B = n_features_;

    // Per-block partial sums combined in block order: bit-identical results for
    // any job count.
    const int blocks = block_count(M);
    const std::size_t gram_len = static_cast<std::size_t>(B) * B;
    std::vector<long> block_bad(blocks, -1);

    const int S = n_strata_;
    std::vector<double> gram(static_cast<std::size_t>(S) * gram_len, 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(S) * B, 0.0);
    std::vector<int> count(S, 0);

    std::vector<double> blocks_gram(static_cast<std::size_t>(blocks) * S * gram_len, 0.0);
    std::vector<double> blocks_rhs(static_cast<std::size_t>(blocks) * S * B, 0.0);
    for_each_block(M, jobs_, [&](int b, int begin, int end) {
        double* bg = blocks_gram.data() + static_cast<std::size_t>(b) * S * gram_len;
        double* br = blocks_rhs.data() + static_cast<std::size_t>(b) * S * B;
        for (int m = begin; m < end; ++m) {
            const int s = stratum_[m];
            const double* row = features_.data() + static_cast<std::size_t>(m) * B;
            const double y = target[m];
            if (!std::isfinite(y)) {
                block_bad[b] = m;
                return;
            }
            double* G = bg + static_cast<std::size_t>(s) * gram_len;
            double* R = br + static_cast<std::size_t>(s) * B;
            for (int i = 0; i < B; ++i) {
                if (!std::isfinite(row[i])) {
                    block_bad[b] = m;
                    return;
                }
                for (int j = 0; j <= i; ++j)
                    G[static_cast<std::size_t>(i) * B + j] += row[i] * row[j];
                R[i] += row[i] * y;
            }
        }
    });
    for (int b = 0; b < blocks; ++b) {
        if (block_bad[b] >= 0)
            throw NumericalFailure("regression: non-finite feature or target", block_bad[b],
                                   node_);
        for (int s = 0; s < S; ++s) {
            const double* G = blocks_gram.data() +
                              (static_cast<std::size_t>(b) * S + s) * gram_len;
            const double* R =
                blocks_rhs.data() + (static_cast<std::size_t>(b) * S + s) * B;
            for (std::size_t i = 0; i < gram_len; ++i)
                gram[static_cast<std::size_t>(s) * gram_len + i] += G[i];
            for (int i = 0; i < B; ++i) rhs[static_cast<std::size_t>(s) * B + i] += R[i];
        }
    }
    for (int m = 0; m < M; ++m) ++count[stratum_[m]];

    // Symmetrize and solve per stratum.
    std::vector<std::vector<double>> beta(S);
    for (int s = 0; s < S; ++s) {
        if (count[s] == 0) continue;
        std::vector<double> G(gram_len);
        for (int i = 0; i < B; ++i)
            for (int j = 0; j < B; ++j)
                G[static_cast<std::size_t>(i) * B + j] =
                    gram[static_cast<std::size_t>(s) * gram_len +
                         static_cast<std::size_t>(std::max(i, j)) * B + std::min(i, j)];
        CholeskySolve chol;
        if (!chol.factor(G, B))
            throw NumericalFailure("regression: constant column pivot collapsed", -1, node_);
        beta[s] = chol.solve(std::vector<double>(
            rhs.begin() + static_cast<std::size_t>(s) * B,
            rhs.begin() + static_cast<std::size_t>(s + 1) * B));
        if (diag) {
            diag->dropped_columns += chol.dropped;
            diag->worst_condition = std::max(diag->worst_condition, chol.condition);
        }
    }
    if (diag) diag->basis_size = B;

    std::vector<double> fitted(M, 0.0);
    for_each_block(M, jobs_, [&](int, int begin, int end) {
        for (int m = begin; m < end; ++m) {
            const double* row = features_.data() + static_cast<std::size_t>(m) * B;
            const auto& bcoef = beta[stratum_[m]];
            double v = 0.0;
            for (int i = 0; i < B; ++i) v += bcoef[i] * row[i];
            fitted[m] = v;
        }
    });
    return fitted;
}

} // namespace bsdelab
