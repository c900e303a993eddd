#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "geocluster/error.hpp"
#include "geocluster/modularity.hpp"
#include "geocluster/random.hpp"

// Louvain for the multi-null-model quality
//
//   H = sum_{u,v same community} A_uv - sum_l c_l sum_c K_{c,l}^2,
//
// where every vertex carries a strength k_{u,l} in each null-model layer l,
// K_{c,l} is the community total and c_l = gamma_l / 2m_l. One layer gives
// ordinary modularity; one layer per slice plus interslice edges gives the
// multislice quality. Q = H / 2mu.

namespace geocluster {
namespace {

// Sparse per-vertex layer strengths in CSR form.
struct LayerStrengths {
    std::vector<std::size_t> offsets{0};
    std::vector<int> layer;
    std::vector<double> value;

    std::size_t begin(int u) const { return offsets[static_cast<std::size_t>(u)]; }
    std::size_t end(int u) const { return offsets[static_cast<std::size_t>(u) + 1]; }
};

struct Problem {
    std::vector<double> coefficient;  // c_l
    double two_mu = 0.0;
};

// Level-0 graph: dense symmetric slices stacked slice-major, each vertex linked
// to its copies in adjacent slices with weight omega.
class StackView {
public:
    StackView(std::vector<const Matrix*> slices, double omega)
        : slices_(std::move(slices)), omega_(omega), n_(static_cast<int>(slices_.front()->rows())) {}

    int size() const { return n_ * static_cast<int>(slices_.size()); }

    double self_loop(int u) const {
        const int s = u / n_;
        const int i = u % n_;
        return (*slices_[static_cast<std::size_t>(s)])(i, i);
    }

    template <typename F>
    void for_each_neighbor(int u, F&& f) const {
        const int s = u / n_;
        const int i = u % n_;
        // Column i equals row i by symmetry and is contiguous in memory.
        const double* col = slices_[static_cast<std::size_t>(s)]->data() + static_cast<std::size_t>(i) * n_;
        const int base = s * n_;
        for (int j = 0; j < n_; ++j) {
            if (j != i && col[j] != 0.0) f(base + j, col[j]);
        }
        if (omega_ > 0.0) {
            if (s > 0) f(u - n_, omega_);
            if (s + 1 < static_cast<int>(slices_.size())) f(u + n_, omega_);
        }
    }

private:
    std::vector<const Matrix*> slices_;
    double omega_;
    int n_;
};

// Aggregated graph. Off-diagonal adjacency in CSR; self-loops hold the
// ordered-pair weight sum of the merged vertices.
class CsrGraph {
public:
    std::vector<std::size_t> offsets{0};
    std::vector<int> targets;
    std::vector<double> weights;
    std::vector<double> self;

    int size() const { return static_cast<int>(self.size()); }
    double self_loop(int u) const { return self[static_cast<std::size_t>(u)]; }

    template <typename F>
    void for_each_neighbor(int u, F&& f) const {
        for (std::size_t e = offsets[static_cast<std::size_t>(u)]; e < offsets[static_cast<std::size_t>(u) + 1]; ++e) {
            f(targets[e], weights[e]);
        }
    }
};

template <typename Graph>
bool move_phase(const Graph& g, const LayerStrengths& ks, const Problem& problem, std::vector<int>& community,
                Rng& rng, const LouvainOptions& options) {
    const int n = g.size();
    const std::size_t layers = problem.coefficient.size();
    const double eps = 1e-13 * problem.two_mu;

    community.resize(static_cast<std::size_t>(n));
    std::iota(community.begin(), community.end(), 0);
    std::vector<int> size(static_cast<std::size_t>(n), 1);
    std::vector<int> empty;
    std::vector<double> totals(static_cast<std::size_t>(n) * layers, 0.0);
    for (int u = 0; u < n; ++u) {
        for (std::size_t e = ks.begin(u); e < ks.end(u); ++e) {
            totals[static_cast<std::size_t>(u) * layers + static_cast<std::size_t>(ks.layer[e])] += ks.value[e];
        }
    }

    auto null_term = [&](int u, int c) {
        double s = 0.0;
        const std::size_t row = static_cast<std::size_t>(c) * layers;
        for (std::size_t e = ks.begin(u); e < ks.end(u); ++e) {
            const auto l = static_cast<std::size_t>(ks.layer[e]);
            s += problem.coefficient[l] * ks.value[e] * totals[row + l];
        }
        return s;
    };
    auto shift = [&](int u, int c, double sign) {
        const std::size_t row = static_cast<std::size_t>(c) * layers;
        for (std::size_t e = ks.begin(u); e < ks.end(u); ++e) {
            totals[row + static_cast<std::size_t>(ks.layer[e])] += sign * ks.value[e];
        }
    };

    std::vector<double> link(static_cast<std::size_t>(n), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> touched;
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    bool moved_any = false;
    for (int sweep = 0; sweep < options.max_sweeps_per_level; ++sweep) {
        rng.shuffle(std::span<int>(order));
        int moves = 0;
        for (int u : order) {
            const int from = community[static_cast<std::size_t>(u)];
            g.for_each_neighbor(u, [&](int v, double w) {
                const int c = community[static_cast<std::size_t>(v)];
                if (!seen[static_cast<std::size_t>(c)]) {
                    seen[static_cast<std::size_t>(c)] = 1;
                    touched.push_back(c);
                }
                link[static_cast<std::size_t>(c)] += w;
            });

            shift(u, from, -1.0);
            const double stay = link[static_cast<std::size_t>(from)] - null_term(u, from);
            double best = stay;
            int target = from;
            for (int c : touched) {
                if (c == from) continue;
                const double gain = link[static_cast<std::size_t>(c)] - null_term(u, c);
                if (gain > best + eps) {
                    best = gain;
                    target = c;
                }
            }
            // A vertex alone in a fresh community gains exactly zero.
            if (size[static_cast<std::size_t>(from)] > 1 && 0.0 > best + eps && !empty.empty()) {
                target = empty.back();
                empty.pop_back();
                best = 0.0;
            }
            shift(u, target, 1.0);

            if (target != from) {
                if (--size[static_cast<std::size_t>(from)] == 0) empty.push_back(from);
                ++size[static_cast<std::size_t>(target)];
                community[static_cast<std::size_t>(u)] = target;
                ++moves;
                if (options.on_move) options.on_move(2.0 * (best - stay) / problem.two_mu);
            }
            for (int c : touched) {
                link[static_cast<std::size_t>(c)] = 0.0;
                seen[static_cast<std::size_t>(c)] = 0;
            }
            touched.clear();
        }
        if (moves == 0) break;
        moved_any = true;
    }
    return moved_any;
}

// Contiguous ids in order of first appearance; returns the community count.
int renumber(std::vector<int>& community) {
    std::vector<int> map(community.size(), -1);
    int next = 0;
    for (int& c : community) {
        int& m = map[static_cast<std::size_t>(c)];
        if (m < 0) m = next++;
        c = m;
    }
    return next;
}

template <typename Graph>
CsrGraph aggregate(const Graph& g, const LayerStrengths& ks, const std::vector<int>& community, int count,
                   std::size_t layers, LayerStrengths& out_ks) {
    std::vector<std::vector<int>> members(static_cast<std::size_t>(count));
    for (int u = 0; u < g.size(); ++u) members[static_cast<std::size_t>(community[static_cast<std::size_t>(u)])].push_back(u);

    CsrGraph out;
    out.self.assign(static_cast<std::size_t>(count), 0.0);
    out_ks = LayerStrengths{};

    std::vector<double> acc(static_cast<std::size_t>(count), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(count), 0);
    std::vector<int> touched;
    std::vector<double> layer_acc(layers, 0.0);
    std::vector<char> layer_seen(layers, 0);
    std::vector<int> layer_touched;

    for (int c = 0; c < count; ++c) {
        double& self = out.self[static_cast<std::size_t>(c)];
        for (int u : members[static_cast<std::size_t>(c)]) {
            self += g.self_loop(u);
            g.for_each_neighbor(u, [&](int v, double w) {
                const int d = community[static_cast<std::size_t>(v)];
                if (d == c) {
                    self += w;
                    return;
                }
                if (!seen[static_cast<std::size_t>(d)]) {
                    seen[static_cast<std::size_t>(d)] = 1;
                    touched.push_back(d);
                }
                acc[static_cast<std::size_t>(d)] += w;
            });
            for (std::size_t e = ks.begin(u); e < ks.end(u); ++e) {
                const auto l = static_cast<std::size_t>(ks.layer[e]);
                if (!layer_seen[l]) {
                    layer_seen[l] = 1;
                    layer_touched.push_back(static_cast<int>(l));
                }
                layer_acc[l] += ks.value[e];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int d : touched) {
            out.targets.push_back(d);
            out.weights.push_back(acc[static_cast<std::size_t>(d)]);
            acc[static_cast<std::size_t>(d)] = 0.0;
            seen[static_cast<std::size_t>(d)] = 0;
        }
        out.offsets.push_back(out.targets.size());
        touched.clear();

        std::sort(layer_touched.begin(), layer_touched.end());
        for (int l : layer_touched) {
            out_ks.layer.push_back(l);
            out_ks.value.push_back(layer_acc[static_cast<std::size_t>(l)]);
            layer_acc[static_cast<std::size_t>(l)] = 0.0;
            layer_seen[static_cast<std::size_t>(l)] = 0;
        }
        out_ks.offsets.push_back(out_ks.layer.size());
        layer_touched.clear();
    }
    return out;
}

// Runs all levels; returns the level-0 community of every vertex.
std::vector<int> run_levels(const StackView& view, const LayerStrengths& ks0, const Problem& problem,
                            std::uint64_t seed, const LouvainOptions& options) {
    Rng rng(mix_seed(seed, 0x4c56));
    const std::size_t layers = problem.coefficient.size();

    std::vector<int> community;
    const bool moved = move_phase(view, ks0, problem, community, rng, options);
    const int count = renumber(community);
    std::vector<int> membership = community;
    if (!moved) return membership;

    LayerStrengths ks;
    CsrGraph g = aggregate(view, ks0, community, count, layers, ks);
    while (true) {
        if (!move_phase(g, ks, problem, community, rng, options)) break;
        const int next_count = renumber(community);
        for (int& m : membership) m = community[static_cast<std::size_t>(m)];
        LayerStrengths next_ks;
        CsrGraph next = aggregate(g, ks, community, next_count, layers, next_ks);
        g = std::move(next);
        ks = std::move(next_ks);
    }
    return membership;
}

void require_symmetric_nonnegative(const Matrix& a, const std::string& what) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw Error(ErrorCode::DimensionMismatch, what + " is not square");
    const double scale = a.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
            if (a(i, j) < 0.0) throw Error(ErrorCode::InvalidArgument, what + " has negative entries");
            if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale) {
                throw Error(ErrorCode::InvalidArgument, what + " is not symmetric");
            }
        }
    }
}

}  // namespace

Partition louvain(const Matrix& adjacency, double gamma, std::uint64_t seed, const LouvainOptions& options) {
    if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
    require_symmetric_nonnegative(adjacency, "adjacency");
    const int n = static_cast<int>(adjacency.rows());
    const Vector d = adjacency.rowwise().sum();
    const double total = d.sum();
    if (!(total > 0.0)) throw Error(ErrorCode::EmptyGraph, "total strength is zero");

    LayerStrengths ks;
    for (int i = 0; i < n; ++i) {
        ks.layer.push_back(0);
        ks.value.push_back(d(i));
        ks.offsets.push_back(ks.layer.size());
    }
    const Problem problem{{gamma / total}, total};
    const StackView view({&adjacency}, 0.0);

    Partition p = canonical_partition(run_levels(view, ks, problem, seed, options));
    p.objective = modularity_score(adjacency, p, gamma);

    // Everything in one community scores exactly 1 - gamma.
    const double single = 1.0 - gamma;
    if (single > p.objective + 1e-15) {
        if (options.on_move) options.on_move(single - p.objective);
        p.assignment.assign(static_cast<std::size_t>(n), 0);
        p.community_count = 1;
        p.objective = modularity_score(adjacency, p, gamma);
    }
    return p;
}

MultisliceAssignment multislice_louvain(const SliceStack& stack, std::uint64_t seed, const LouvainOptions& options) {
    const int n = stack.vertex_count();
    const int slices = stack.slice_count();

    std::vector<const Matrix*> mats;
    Problem problem;
    LayerStrengths ks;
    for (int s = 0; s < slices; ++s) {
        const Matrix& a = *stack.slice(s).adjacency;
        require_symmetric_nonnegative(a, "slice " + std::to_string(s));
        const Vector d = a.rowwise().sum();
        const double total = d.sum();
        if (!(total > 0.0)) throw Error(ErrorCode::EmptyGraph, "slice " + std::to_string(s) + " is empty");
        mats.push_back(&a);
        problem.coefficient.push_back(stack.slice(s).gamma / total);
        problem.two_mu += total;
        for (int i = 0; i < n; ++i) {
            ks.layer.push_back(s);
            ks.value.push_back(d(i));
            ks.offsets.push_back(ks.layer.size());
        }
    }
    problem.two_mu += 2.0 * stack.omega() * n * (slices - 1);

    const StackView view(std::move(mats), stack.omega());
    const Partition flat = canonical_partition(run_levels(view, ks, problem, seed, options));

    MultisliceAssignment out;
    out.vertex_count = n;
    out.slice_count = slices;
    out.ids = flat.assignment;
    out.community_count = flat.community_count;
    out.objective = multislice_score(stack, out);
    return out;
}

}  // namespace geocluster
