// SPDX-License-Identifier: MIT
// Copyright (c) 2026 the specrec authors

#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "laurent_series.hpp"
#include "linalg.hpp"
#include "recursion.hpp"
#include "residue_core.hpp"
#include "scalar.hpp"
#include "spectral_curve.hpp"

// Diagram expansion of the correlator recursion.
//
// Fully unrolling the recursion for W^{(h)}_{k+1} writes it as a sum of
// nested-residue terms. Each term is a rooted tree of trivalent residue
// vertices: a vertex either feeds both of its upper legs into one correlator
// of lower genus (a handle vertex, closing a loop edge back onto a marked
// leg) or splits them between two independent factors (a split vertex). Leaf
// factors are two-point functions ending either on an external point or on
// the marked leg of an ancestor vertex.
//
// Exchanging the two factors of a split vertex, together with the deck
// involution of its residue variable, maps a term to a term with the same
// value; a diagram is one orbit of terms under these exchanges, stored as
// its lexicographically smallest member with the orbit size as multiplicity.
// Summing multiplicity-weighted diagram values therefore reproduces the
// recursion exactly, and summing multiplicities reproduces the exhaustive
// term count. Handle vertices admit no exchange: their image would hang the
// arrowed edge on the marked leg, which no unrolled term does.
//
// Canonical bracket grammar, used for ordering, deduplication, golden files:
//   b<i>      two-point leaf ending on external point #i (1-based)
//   u<d>      two-point leaf ending on the marked leg of the vertex d arrow
//             steps above the leaf's own vertex (u0 is a self-loop)
//   o(C)      handle vertex over child subcall C
//   p(L|R)    split vertex with factor subcalls L and R, L <= R as strings

namespace specrec {

enum class node_kind { leaf, handle, split };

struct diagram_node {
    node_kind kind = node_kind::leaf;
    int h = 0;    // genus carried by the subcall rooted here
    int line = 0; // leaf only: external index if > 0, else -(introducer depth)
    std::unique_ptr<diagram_node> first, second;
};

inline std::unique_ptr<diagram_node> make_leaf(int line) {
    auto n = std::make_unique<diagram_node>();
    n->kind = node_kind::leaf;
    n->line = line;
    return n;
}

inline std::unique_ptr<diagram_node> make_handle(std::unique_ptr<diagram_node> child) {
    if (!child) throw internal_error("handle vertex without a child");
    auto n = std::make_unique<diagram_node>();
    n->kind = node_kind::handle;
    n->h = child->h + 1;
    n->first = std::move(child);
    return n;
}

inline std::unique_ptr<diagram_node> make_split(std::unique_ptr<diagram_node> a,
                                                std::unique_ptr<diagram_node> b) {
    if (!a || !b) throw internal_error("split vertex without two factors");
    auto n = std::make_unique<diagram_node>();
    n->kind = node_kind::split;
    n->h = a->h + b->h;
    n->first = std::move(a);
    n->second = std::move(b);
    return n;
}

namespace detail {

inline std::unique_ptr<diagram_node> clone_node(const diagram_node& n) {
    auto c = std::make_unique<diagram_node>();
    c->kind = n.kind;
    c->h = n.h;
    c->line = n.line;
    if (n.first) c->first = clone_node(*n.first);
    if (n.second) c->second = clone_node(*n.second);
    return c;
}

// owner_depth is the arrow depth of the vertex this subcall hangs from; the
// whole tree is serialized with owner_depth -1 so the root vertex sits at 0.
inline std::string serialize_node(const diagram_node& n, int owner_depth) {
    switch (n.kind) {
    case node_kind::leaf:
        if (n.line > 0) return "b" + std::to_string(n.line);
        return "u" + std::to_string(owner_depth - (-n.line));
    case node_kind::handle:
        return "o(" + serialize_node(*n.first, owner_depth + 1) + ")";
    case node_kind::split:
        return "p(" + serialize_node(*n.first, owner_depth + 1) + "|" +
               serialize_node(*n.second, owner_depth + 1) + ")";
    }
    throw internal_error("unreachable diagram node kind");
}

inline void count_nodes(const diagram_node& n, int& vertices, int& leaves) {
    if (n.kind == node_kind::leaf) {
        ++leaves;
        return;
    }
    ++vertices;
    count_nodes(*n.first, vertices, leaves);
    if (n.second) count_nodes(*n.second, vertices, leaves);
}

// Lines the subtree references from outside itself: external legs plus loop
// legs whose introducing vertex sits above root_depth.
inline void collect_free_lines(const diagram_node& n, int root_depth, std::vector<int>& ext,
                               std::vector<int>& loop_depths) {
    if (n.kind == node_kind::leaf) {
        if (n.line > 0) {
            ext.push_back(n.line);
        } else if (-n.line < root_depth) {
            loop_depths.push_back(-n.line);
        }
        return;
    }
    collect_free_lines(*n.first, root_depth, ext, loop_depths);
    if (n.second) collect_free_lines(*n.second, root_depth, ext, loop_depths);
}

inline int free_line_count(const diagram_node& n, int root_depth) {
    std::vector<int> ext, loops;
    collect_free_lines(n, root_depth, ext, loops);
    return static_cast<int>(ext.size() + loops.size());
}

struct term_entry {
    std::unique_ptr<diagram_node> node;
    long long mu = 1;
    std::string bracket;
};

// All diagrams of the subcall W^{(h)} carrying the given non-root lines,
// whose vertex (if any) sits at arrow depth vdepth. Line ids: external index
// if positive, -(introducer depth) for loop lines.
inline std::vector<term_entry> enumerate_terms(int h, const std::vector<int>& lines, int vdepth) {
    std::vector<term_entry> out;
    if (h == 0 && lines.size() == 1) {
        term_entry e;
        e.node = make_leaf(lines[0]);
        e.bracket = serialize_node(*e.node, vdepth - 1);
        out.push_back(std::move(e));
        return out;
    }
    if (h < 0 || (h == 0 && lines.size() < 2))
        throw internal_error("diagram enumeration reached an unstable subcall");

    if (h >= 1) {
        std::vector<int> sub = lines;
        sub.push_back(-vdepth);
        std::sort(sub.begin(), sub.end());
        for (auto& c : enumerate_terms(h - 1, sub, vdepth + 1)) {
            term_entry e;
            e.bracket = "o(" + c.bracket + ")";
            e.node = make_handle(std::move(c.node));
            e.mu = c.mu;
            out.push_back(std::move(e));
        }
    }

    const std::size_t m = lines.size();
    const unsigned full = m ? ((1u << m) - 1u) : 0u;
    auto combine = [&out](const term_entry& l, const term_entry& r, long long mu) {
        term_entry e;
        const bool ordered = l.bracket <= r.bracket;
        const term_entry& a = ordered ? l : r;
        const term_entry& b = ordered ? r : l;
        e.node = make_split(clone_node(*a.node), clone_node(*b.node));
        e.mu = mu;
        e.bracket = "p(" + a.bracket + "|" + b.bracket + ")";
        out.push_back(std::move(e));
    };
    for (int h1 = 0; h1 <= h; ++h1) {
        for (unsigned mask = 0; mask <= full; ++mask) {
            const int h2 = h - h1;
            const unsigned rest = full & ~mask;
            if (h1 == 0 && mask == 0) continue;
            if (h2 == 0 && rest == 0) continue;
            // one orientation per unordered split
            if (h1 > h2 || (h1 == h2 && mask > rest)) continue;
            std::vector<int> li, lj;
            for (std::size_t i = 0; i < m; ++i)
                ((mask >> i) & 1u ? li : lj).push_back(lines[i]);
            const std::vector<term_entry> ls = enumerate_terms(h1, li, vdepth + 1);
            if (h1 == h2 && mask == rest) {
                // identical subcall on both slots: unordered pairs of entries
                for (std::size_t i = 0; i < ls.size(); ++i)
                    for (std::size_t j = i; j < ls.size(); ++j)
                        combine(ls[i], ls[j],
                                (i == j ? 1 : 2) * ls[i].mu * ls[j].mu);
            } else {
                const std::vector<term_entry> rs = enumerate_terms(h2, lj, vdepth + 1);
                for (const auto& l : ls)
                    for (const auto& r : rs) combine(l, r, 2 * l.mu * r.mu);
            }
        }
    }
    return out;
}

} // namespace detail

struct diagram {
    int h = 0, k = 0;
    long long multiplicity = 1;
    std::string bracket;
    std::shared_ptr<const diagram_node> root;
    int vertices = 0;    // trivalent residue vertices, = arrowed edges
    int propagators = 0; // two-point edges: k external legs + h loop edges
};

// All diagrams of W^{(h)}_{k+1}, sorted by bracket string. Multiplicities sum
// to the exhaustive unrolled term count of the recursion.
inline std::vector<diagram> enumerate_diagrams(int h, int k) {
    if (h < 0 || k < 0 || h + k > 24) throw unsupported_order_error("diagram order out of range");
    if (2 * h + k - 1 < 1)
        throw unsupported_order_error("no residue vertices below the first stable order");
    std::vector<int> lines(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) lines[static_cast<std::size_t>(i)] = i + 1;
    std::vector<detail::term_entry> entries = detail::enumerate_terms(h, lines, 0);
    std::sort(entries.begin(), entries.end(),
              [](const detail::term_entry& a, const detail::term_entry& b) {
                  return a.bracket < b.bracket;
              });
    std::vector<diagram> out;
    out.reserve(entries.size());
    for (auto& e : entries) {
        diagram d;
        d.h = h;
        d.k = k;
        d.multiplicity = e.mu;
        d.bracket = std::move(e.bracket);
        int vertices = 0, leaves = 0;
        detail::count_nodes(*e.node, vertices, leaves);
        if (vertices != 2 * h + k - 1 || leaves != h + k)
            throw internal_error("enumerated diagram violates its vertex or edge count");
        d.vertices = vertices;
        d.propagators = leaves;
        d.root = std::shared_ptr<const diagram_node>(std::move(e.node));
        out.push_back(std::move(d));
    }
    return out;
}

// One edge of a diagram, for the propagator-cutting construction. The path
// lists the factor slots taken from the root vertex down to the edge; the
// root arrow has an empty path.
struct cut_descriptor {
    int edge_index = 0;
    bool arrow = true; // true: arrowed vertex-to-vertex edge, false: two-point edge
    std::vector<int> path;
    std::string label;
};

namespace detail {

inline void walk_edges(const diagram_node& n, std::vector<int>& path,
                       std::vector<cut_descriptor>& out) {
    const int slots = n.kind == node_kind::split ? 2 : 1;
    for (int s = 0; s < slots; ++s) {
        const diagram_node& sub = s == 0 ? *n.first : *n.second;
        path.push_back(s);
        cut_descriptor d;
        d.edge_index = static_cast<int>(out.size());
        d.arrow = sub.kind != node_kind::leaf;
        d.path = path;
        out.push_back(std::move(d));
        if (sub.kind != node_kind::leaf) walk_edges(sub, path, out);
        path.pop_back();
    }
}

} // namespace detail

inline std::vector<cut_descriptor> all_edges(const diagram& d) {
    std::vector<cut_descriptor> out;
    cut_descriptor root;
    root.edge_index = 0;
    root.arrow = true;
    out.push_back(std::move(root));
    std::vector<int> path;
    detail::walk_edges(*d.root, path, out);
    for (auto& e : out) {
        e.label = d.bracket + "#" + std::to_string(e.edge_index) + (e.arrow ? ":arrow" : ":prop");
    }
    return out;
}

inline int edge_count(const diagram& d) { return d.vertices + d.propagators; }

inline cut_descriptor cut_propagator(const diagram& d, int edge_index) {
    std::vector<cut_descriptor> edges = all_edges(d);
    if (edge_index < 0 || edge_index >= static_cast<int>(edges.size()))
        throw internal_error("cut requested for an edge the diagram does not have");
    return edges[static_cast<std::size_t>(edge_index)];
}

// Evaluates single diagrams by nested branch-point residues, innermost
// vertices first. A vertex value, read as a function of the point feeding its
// incoming arrow, is a polar part at the branch points, so composition along
// the tree stays in closed form; the dependence of a handle child on the
// marked-leg line is reconstructed by sampling that line at generic points,
// solved against a polar basis that keeps simple poles, verified on three
// held-out samples, and escalated when verification fails.
template <class F>
class diagram_evaluator {
public:
    explicit diagram_evaluator(std::shared_ptr<const spectral_curve<F>> curve,
                               int order_padding = 0)
        : m_curve(std::move(curve)), m_padding(order_padding) {
        if (!m_curve) throw internal_error("diagram evaluator constructed without a curve");
    }

    const spectral_curve<F>& curve() const { return *m_curve; }

    // Multiplicity-weighted contribution of one diagram at points =
    // {root point, external points 1..k}. Summing over enumerate_diagrams(h, k)
    // gives W^{(h)}_{k+1} exactly, in the same stored-curve normalization the
    // recursion engine reports; dressing(h, k+1) converts either one to the
    // original-model normalization.
    F evaluate(const diagram& d, const std::vector<F>& points) {
        if (static_cast<int>(points.size()) != d.k + 1)
            throw internal_error("diagram evaluated with the wrong number of points");
        check_regular(points);
        env_t env = make_env(points);
        F raw = term_value_impl(*d.root, env);
        return traits::from_int(static_cast<long>(d.multiplicity)) * raw;
    }

    // Raw nested-residue value of one term tree, without multiplicity or
    // dressing: lets tests compare slot-swapped variants of the same orbit.
    F term_value(const diagram_node& root, const std::vector<F>& points) {
        check_regular(points);
        env_t env = make_env(points);
        return term_value_impl(root, env);
    }

    // Multiplicity-weighted residue sum for a closed diagram (k == 0) with
    // the root pairing replaced by a caller-supplied weight: returns
    //   multiplicity * sum over branch points of
    //     Res_s [ weight(frame) * bracket(s) / ((y(s) - y(sigma s)) x'(s)) ],
    // where bracket is the root vertex's subtree pairing in the local chart
    // of each branch point. weight receives the residue frame and must return
    // a series on the same chart. extra_order widens the series window when
    // the weight itself lowers valuations.
    template <class Weight>
    F weighted_root_residue(const diagram& d, Weight&& weight, int extra_order = 0) {
        if (d.k != 0)
            throw internal_error("weighted root residue requires a closed diagram");
        std::vector<F> none;
        env_t env = make_env(none);
        const diagram_node& v = *d.root;
        const int L = crude_bound(v, 0) + 6 + m_padding + extra_order;
        F acc = traits::zero();
        const std::size_t nbp = m_curve->branch_points().size();
        for (std::size_t ai = 0; ai < nbp; ++ai) {
            detail::residue_frame<F>& fr = frame_for(ai, L);
            series g = vertex_bracket(fr, v, 0, env) * fr.dinv * weight(fr);
            acc += g.residue();
        }
        return traits::from_int(static_cast<long>(d.multiplicity)) * acc;
    }

private:
    using series = laurent_series<F>;
    using traits = field_traits<F>;

    struct env_t {
        const std::vector<F>* points = nullptr;
        std::map<int, F> loops; // introducer depth -> sampled value
        std::string points_key;
    };

    void check_regular(const std::vector<F>& points) const {
        for (const F& p : points)
            for (const F& a : m_curve->branch_points())
                if (traits::approx_equal(p, a) || !traits::is_invertible(p - a))
                    throw branch_value_error("diagram evaluated at a branch point");
    }

    env_t make_env(const std::vector<F>& points) const {
        env_t env;
        env.points = &points;
        for (const F& p : points) {
            env.points_key += traits::to_string(p);
            env.points_key += ',';
        }
        return env;
    }

    F line_value(int line, const env_t& env) const {
        if (line > 0) {
            if (line >= static_cast<int>(env.points->size()))
                throw internal_error("diagram references an external point it was not given");
            return (*env.points)[static_cast<std::size_t>(line)];
        }
        auto it = env.loops.find(-line);
        if (it == env.loops.end())
            throw internal_error("loop line evaluated outside the scope of its vertex");
        return it->second;
    }

    F term_value_impl(const diagram_node& root, const env_t& env) {
        if (root.kind == node_kind::leaf) {
            F d = (*env.points)[0] - line_value(root.line, env);
            if (!traits::is_invertible(d))
                throw internal_error("two-point leaf evaluated at coinciding points");
            F inv = traits::one() / d;
            return inv * inv;
        }
        return vertex_polar(root, 0, env).eval((*env.points)[0]);
    }

    // Shared per-branch frames, keyed by (branch index, window), so charts,
    // kernel inverses, and slot caches are built once per window class. The
    // node-based map keeps references valid across nested insertions.
    detail::residue_frame<F>& frame_for(std::size_t ai, int L) {
        auto it = m_frames.find({ai, L});
        if (it != m_frames.end()) return it->second;
        return m_frames.try_emplace({ai, L}, *m_curve, ai, L).first->second;
    }

    // Upper bound for the pole order a vertex value can reach in its root
    // slot; the vertex's own bracket reaches two orders less, which is what
    // sizes the series window. Handle children add their reconstruction
    // order (escalation margins included in the +6).
    int crude_bound(const diagram_node& n, int vdepth) const {
        if (n.kind == node_kind::leaf) return 2;
        if (n.kind == node_kind::split) {
            const int a = n.first->kind == node_kind::leaf ? 0 : crude_bound(*n.first, vdepth + 1);
            const int b = n.second->kind == node_kind::leaf ? 0 : crude_bound(*n.second, vdepth + 1);
            return a + b + 2;
        }
        if (n.first->kind == node_kind::leaf) return 4;
        return crude_bound(*n.first, vdepth + 1) + second_slot_bound(n, vdepth) + 6;
    }

    int second_slot_bound(const diagram_node& handle, int vdepth) const {
        const int hc = handle.h - 1;
        const int nc = detail::free_line_count(*handle.first, vdepth + 1) + 1;
        return std::max(2, 6 * hc + 2 * nc - 4);
    }

    std::string memo_key(const diagram_node& v, int vdepth, const env_t& env) const {
        std::string key = detail::serialize_node(v, vdepth - 1);
        std::vector<int> ext, loops;
        detail::collect_free_lines(v, vdepth, ext, loops);
        std::sort(loops.begin(), loops.end());
        loops.erase(std::unique(loops.begin(), loops.end()), loops.end());
        for (int d : loops) {
            auto it = env.loops.find(d);
            if (it == env.loops.end())
                throw internal_error("loop line evaluated outside the scope of its vertex");
            key += ';';
            key += std::to_string(vdepth - d);
            key += '=';
            key += traits::to_string(it->second);
        }
        key += '@';
        key += env.points_key;
        return key;
    }

    const polar_part<F>& vertex_polar(const diagram_node& v, int vdepth, const env_t& env) {
        const std::string key = memo_key(v, vdepth, env);
        auto hit = m_memo.find(key);
        if (hit != m_memo.end()) return hit->second;

        const int L = crude_bound(v, vdepth) + 6 + m_padding;
        const std::size_t nbp = m_curve->branch_points().size();
        polar_part<F> out;
        out.centers = m_curve->branch_points();
        out.coeff.assign(nbp, {});
        for (std::size_t ai = 0; ai < nbp; ++ai) {
            detail::residue_frame<F>& fr = frame_for(ai, L);
            series g = vertex_bracket(fr, v, vdepth, env) * fr.dinv;
            std::map<int, F> res = detail::residue_u_coefficients(fr, g);
            int jmax = 1;
            for (const auto& [j, c] : res)
                if (!traits::is_zero(c)) jmax = std::max(jmax, j);
            std::vector<F> row(static_cast<std::size_t>(std::max(jmax - 1, 0)), traits::zero());
            for (const auto& [j, c] : res)
                if (j <= jmax) row[static_cast<std::size_t>(j - 2)] = c;
            out.coeff[ai] = std::move(row);
        }
        return m_memo.emplace(key, std::move(out)).first->second;
    }

    // The pairing of a vertex's subtrees in the local chart: the product of
    // the two slot series for a split, the self pairing or the reconstructed
    // marked-leg pairing for a handle.
    series vertex_bracket(detail::residue_frame<F>& fr, const diagram_node& v, int vdepth,
                          const env_t& env) {
        if (v.kind == node_kind::handle) {
            if (v.first->kind == node_kind::leaf) return fr.self_loop();
            return handle_bracket(fr, v, vdepth, env);
        }
        return slot_series(fr, *v.first, vdepth, env, false) *
               slot_series(fr, *v.second, vdepth, env, true);
    }

    series slot_series(detail::residue_frame<F>& fr, const diagram_node& sub, int vdepth,
                       const env_t& env, bool conj) {
        if (sub.kind == node_kind::leaf) {
            const F p = line_value(sub.line, env);
            return conj ? fr.bsig(p) : fr.bq(p);
        }
        const polar_part<F>& pol = vertex_polar(sub, vdepth + 1, env);
        series f = series::zero_to(fr.L);
        for (std::size_t b = 0; b < pol.coeff.size(); ++b)
            for (std::size_t t = 0; t < pol.coeff[b].size(); ++t) {
                const F& c = pol.coeff[b][t];
                if (traits::is_zero(c)) continue;
                const int j = static_cast<int>(t) + 2;
                f += c * (conj ? fr.esig(static_cast<int>(b), j) : fr.eq(static_cast<int>(b), j));
            }
        return f;
    }

    // The bracket of a handle vertex whose child is itself a vertex: the
    // child is a function of its root slot and of this vertex's marked leg,
    // reconstructed from samples of the latter and plugged in as a
    // (running point, conjugate point) pair.
    series handle_bracket(detail::residue_frame<F>& fr, const diagram_node& v, int vdepth,
                          const env_t& env) {
        const diagram_node& child = *v.first;
        const std::size_t nbp = m_curve->branch_points().size();
        int bound2 = second_slot_bound(v, vdepth);
        for (int attempt = 0;; ++attempt) {
            const int cols = static_cast<int>(nbp) * bound2;
            const int want = cols + 3;
            const std::vector<F> samples = detail::generic_sample_points(*m_curve, want);
            std::vector<const polar_part<F>*> rows;
            rows.reserve(samples.size());
            for (const F& t : samples) {
                env_t sub = env;
                sub.loops[vdepth] = t;
                rows.push_back(&vertex_polar(child, vdepth + 1, sub));
            }
            const detail::sample_basis<F>& sys = basis_for(bound2);

            std::size_t j0cap = 0;
            for (const auto* r : rows)
                for (const auto& braw : r->coeff) j0cap = std::max(j0cap, braw.size());

            series bracket = series::zero_to(fr.L);
            bool ok = true;
            for (std::size_t b0 = 0; ok && b0 < nbp; ++b0) {
                for (std::size_t t0 = 0; ok && t0 < j0cap; ++t0) {
                    const int j0 = static_cast<int>(t0) + 2;
                    std::vector<F> vals;
                    vals.reserve(samples.size());
                    bool all_zero = true;
                    for (const auto* r : rows) {
                        const auto& braw = r->coeff[b0];
                        F val = t0 < braw.size() ? braw[t0] : traits::zero();
                        if (!traits::is_zero(val)) all_zero = false;
                        vals.push_back(std::move(val));
                    }
                    if (all_zero) continue;
                    std::vector<F> head(vals.begin(), vals.begin() + cols);
                    std::vector<F> sol = detail::matrix_apply(sys.inverse, head);
                    for (int check = 0; check < 3; ++check) {
                        const std::size_t rrow = static_cast<std::size_t>(cols + check);
                        F predicted = traits::zero();
                        for (int col = 0; col < cols; ++col)
                            predicted += sys.full[rrow][static_cast<std::size_t>(col)] *
                                         sol[static_cast<std::size_t>(col)];
                        if (!traits::approx_equal(predicted, vals[rrow])) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) break;
                    series inner = series::zero_to(fr.L);
                    bool any = false;
                    for (std::size_t b1 = 0; b1 < nbp; ++b1)
                        for (int j1 = 1; j1 <= bound2; ++j1) {
                            const F& c = sol[b1 * static_cast<std::size_t>(bound2) +
                                             static_cast<std::size_t>(j1 - 1)];
                            if (traits::is_zero(c)) continue;
                            inner += c * fr.esig(static_cast<int>(b1), j1);
                            any = true;
                        }
                    if (any) bracket += fr.eq(static_cast<int>(b0), j0) * inner;
                }
            }
            if (ok) return bracket;
            if (attempt >= 2)
                throw truncation_insufficient_error(
                    "marked-leg reconstruction failed after escalating the pole order twice");
            bound2 += 2;
        }
    }

    const detail::sample_basis<F>& basis_for(int bound2) {
        auto hit = m_basis.find(bound2);
        if (hit != m_basis.end()) return hit->second;
        const int want = static_cast<int>(m_curve->branch_points().size()) * bound2 + 3;
        detail::sample_basis<F> sys = detail::make_sample_basis(
            m_curve->branch_points(), detail::generic_sample_points(*m_curve, want), 1, bound2);
        return m_basis.emplace(bound2, std::move(sys)).first->second;
    }

    std::shared_ptr<const spectral_curve<F>> m_curve;
    int m_padding;
    std::map<std::string, polar_part<F>> m_memo;
    std::map<int, detail::sample_basis<F>> m_basis;
    std::map<std::pair<std::size_t, int>, detail::residue_frame<F>> m_frames;
};

} // namespace specrec
