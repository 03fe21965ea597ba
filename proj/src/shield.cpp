#include "shieldot/shield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace shieldot {

CandidateScheme CandidateScheme::parse(const std::string& text) {
    if (text == "axes") return axes();
    if (text.rfind("knn:", 0) == 0) {
        std::size_t used = 0;
        int k = 0;
        try {
            k = std::stoi(text.substr(4), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size() - 4 || k < 1) {
            throw Error(ErrorKind::InvalidInput, "bad candidate scheme '" + text + "'");
        }
        return knn(k);
    }
    throw Error(ErrorKind::InvalidInput, "bad candidate scheme '" + text + "' (expected axes or knn:<k>)");
}

std::string CandidateScheme::name() const {
    return kind == CandidateKind::GridAxes ? std::string("axes") : "knn:" + std::to_string(k);
}

CandidateSets::CandidateSets(const std::vector<std::vector<Index>>& rows) {
    offsets_.reserve(rows.size() + 1);
    for (const auto& r : rows) {
        items_.insert(items_.end(), r.begin(), r.end());
        offsets_.push_back(items_.size());
    }
}

CandidateSets make_candidates(const HierarchicalPartition& tree_x, int layer, const CandidateScheme& scheme) {
    const std::size_t n = tree_x.size(layer);
    const int dim = tree_x.dim();
    std::vector<std::vector<Index>> rows(n);
    if (scheme.kind == CandidateKind::GridAxes) {
        if (!tree_x.has_lattice()) throw Error(ErrorKind::InvalidInput, "axes candidates need a declared grid");
        std::vector<std::int64_t> probe(static_cast<std::size_t>(dim));
        for (std::size_t x = 0; x < n; ++x) {
            const auto base = tree_x.lattice(layer, static_cast<Index>(x));
            for (int d = 0; d < dim; ++d) {
                for (int dir : {-1, 1}) {
                    std::copy(base.begin(), base.end(), probe.begin());
                    probe[d] += dir;
                    const Index nb = tree_x.find_lattice(layer, probe);
                    if (nb >= 0) rows[x].push_back(nb);
                }
            }
        }
        return CandidateSets(rows);
    }
    if (scheme.k < 1) throw Error(ErrorKind::InvalidInput, "knn candidates need k >= 1");
    const PointCloud& pts = tree_x.reps(layer);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(scheme.k), n - 1);
    std::vector<std::pair<double, Index>> dist(n);
    for (std::size_t x = 0; x < n; ++x) {
        const auto px = pts[x];
        std::size_t m = 0;
        for (std::size_t o = 0; o < n; ++o) {
            if (o == x) continue;
            const auto po = pts[o];
            double s = 0.0;
            for (int d = 0; d < dim; ++d) {
                const double diff = px[d] - po[d];
                s += diff * diff;
            }
            dist[m++] = {s, static_cast<Index>(o)};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.begin() + static_cast<std::ptrdiff_t>(m));
        for (std::size_t i = 0; i < k; ++i) rows[x].push_back(dist[i].second);
    }
    return CandidateSets(rows);
}

bool shields_exact(const CostEvaluator& cost, Index xa, Index xs, Index ys, Index yb) {
    const __int128 delta = static_cast<__int128>(cost(xa, yb)) - cost(xs, yb) - cost(xa, ys) + cost(xs, ys);
    return delta > 0;
}

namespace {

struct Prepared {
    Index xs;
    Index ys;
    double threshold;  // psi(ys) + slack + tolerance
    CostUnits q_a_ys;
    CostUnits q_s_ys;
};

class TreeSearch {
public:
    TreeSearch(Index xa, std::span<const ShieldCandidate> candidates, const ShieldContext& ctx, ShieldStats* stats)
        : xa_(xa), ctx_(ctx), stats_(stats) {
        const CostEvaluator& cost = *ctx.cost;
        const auto pa = cost.x()[static_cast<std::size_t>(xa)];
        const double quantum = 1.0 / static_cast<double>(cost.cost_scale());
        for (const auto& c : candidates) {
            const auto ps = cost.x()[static_cast<std::size_t>(c.xs)];
            const auto py = cost.y()[static_cast<std::size_t>(c.ys)];
            const double psi_s = geometric_psi(cost.spec(), pa, ps, py);
            const double tol = 2.5 * quantum + 1e-11 * std::max(1.0, std::abs(psi_s));
            prepared_.push_back({c.xs, c.ys, psi_s + cost.slack(xa, c.xs) + tol, cost(xa, c.ys), cost(c.xs, c.ys)});
        }
    }

    void run(int layer, Index cell) { visit(layer, cell); }
    std::vector<Index>& missed() { return missed_; }

private:
    void visit(int layer, Index cell) {
        const CostEvaluator& cost = *ctx_.cost;
        if (layer == ctx_.layer) {
            const CostUnits q_a_yb = cost(xa_, cell);
            for (std::size_t i = 0; i < prepared_.size(); ++i) {
                const Prepared& p = prepared_[(i + hint_) % prepared_.size()];
                const __int128 delta = static_cast<__int128>(q_a_yb) - cost(p.xs, cell) - p.q_a_ys + p.q_s_ys;
                if (delta > 0) {
                    hint_ = (i + hint_) % prepared_.size();
                    return;
                }
            }
            missed_.push_back(cell);
            return;
        }
        const Cell c = ctx_.tree_y->cell(layer, cell);
        const auto pa = cost.x()[static_cast<std::size_t>(xa_)];
        for (std::size_t i = 0; i < prepared_.size(); ++i) {
            const std::size_t j = (i + hint_) % prepared_.size();
            const Prepared& p = prepared_[j];
            if (stats_ != nullptr) ++stats_->psi_hat_calls;
            const double bound = psi_hat(cost.spec(), pa, cost.x()[static_cast<std::size_t>(p.xs)], c);
            const double tol = 1e-11 * std::abs(bound);
            if (bound > p.threshold + tol) {
                hint_ = j;
                return;
            }
        }
        for (Index child : ctx_.tree_y->children(layer, cell)) visit(layer - 1, child);
    }

    Index xa_;
    const ShieldContext& ctx_;
    ShieldStats* stats_;
    std::vector<Prepared> prepared_;
    std::vector<Index> missed_;
    std::size_t hint_ = 0;
};

}  // namespace

std::vector<Index> search_tree(Index xa, std::span<const ShieldCandidate> candidates, const ShieldContext& ctx,
                               ShieldStats* stats) {
    TreeSearch search(xa, candidates, ctx, stats);
    search.run(ctx.tree_y->depth(), 0);
    auto& out = search.missed();
    std::sort(out.begin(), out.end());
    return std::move(out);
}

std::vector<Index> grid_miss(Index xa, std::span<const Index> t, const ShieldContext& ctx) {
    const HierarchicalPartition& tx = *ctx.tree_x;
    const HierarchicalPartition& ty = *ctx.tree_y;
    const CostEvaluator& cost = *ctx.cost;
    const int layer = ctx.layer;
    if (!tx.has_lattice() || !ty.has_lattice()) throw Error(ErrorKind::InvalidInput, "grid shielding needs grids for X and Y");
    if (tx.dim() != ty.dim()) throw Error(ErrorKind::InvalidInput, "grid shape mismatch");
    const auto fam = cost.spec().family;
    if (fam != CostFamily::SqEuclidean && fam != CostFamily::Noisy) {
        throw Error(ErrorKind::InvalidInput, "grid shielding needs a squared Euclidean cost");
    }
    const int dim = tx.dim();
    const auto& extent = ty.lattice_extent(layer);
    const double h_y = ty.spacing(layer);
    const double quantum = 1.0 / static_cast<double>(cost.cost_scale());
    std::vector<std::int64_t> lo(static_cast<std::size_t>(dim), 0), hi(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) hi[d] = extent[d] - 1;

    const auto base = tx.lattice(layer, xa);
    const auto pa = cost.x()[static_cast<std::size_t>(xa)];
    std::vector<std::int64_t> probe(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) {
        for (int dir : {-1, 1}) {
            std::copy(base.begin(), base.end(), probe.begin());
            probe[d] += dir;
            const Index xs = tx.find_lattice(layer, probe);
            if (xs < 0) continue;
            const Index ys = t[static_cast<std::size_t>(xs)];
            const std::int64_t idx = ty.lattice(layer, ys)[d];
            const double h_x = euclidean_distance(pa, cost.x()[static_cast<std::size_t>(xs)]);
            const double margin = (cost.slack(xa, xs) / 2.0 + 1.5 * quantum) / h_x;
            const auto steps = h_y > 0.0 ? static_cast<std::int64_t>(std::floor(margin / h_y)) : 0;
            if (dir > 0) {
                hi[d] = std::min(hi[d], idx + steps);
            } else {
                lo[d] = std::max(lo[d], idx - steps);
            }
        }
    }
    std::vector<Index> out;
    for (int d = 0; d < dim; ++d) {
        if (lo[d] > hi[d]) return out;
    }
    std::vector<std::int64_t> cur(lo);
    for (;;) {
        const Index y = ty.find_lattice(layer, cur);
        if (y >= 0) out.push_back(y);
        int d = dim - 1;
        for (; d >= 0; --d) {
            if (++cur[d] <= hi[d]) break;
            cur[d] = lo[d];
        }
        if (d < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

Neighbourhood shield(const SparseCoupling& pi, const ShieldContext& ctx, ShieldStats* stats) {
    const std::vector<Index> t = extract_map(pi);
    const std::size_t nx = pi.nx();
    std::vector<std::vector<Index>> rows(nx);
    std::vector<ShieldCandidate> cands;
    ShieldStats local;
    for (std::size_t x = 0; x < nx; ++x) {
        auto& row = rows[x];
        for (const auto& e : pi.row(x)) row.push_back(e.y);
        cands.clear();
        for (Index xs : ctx.candidates->of(static_cast<Index>(x))) {
            cands.push_back({xs, t[static_cast<std::size_t>(xs)]});
            row.push_back(t[static_cast<std::size_t>(xs)]);
        }
        std::vector<Index> miss = ctx.method == ShieldMethod::Grid ? grid_miss(static_cast<Index>(x), t, ctx)
                                                                   : search_tree(static_cast<Index>(x), cands, ctx, &local);
        local.missed_total += miss.size();
        row.insert(row.end(), miss.begin(), miss.end());
    }
    Neighbourhood n = Neighbourhood::from_rows(pi.ny(), std::move(rows));
    local.neighbourhood_size = n.size();
    if (stats != nullptr) *stats += local;
    return n;
}

}  // namespace shieldot
