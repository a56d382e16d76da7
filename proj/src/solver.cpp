#include "statcp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace statcp {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int pick_branch_var(const Model& m, const std::vector<Domain>& doms, double eps) {
    int best = -1;
    size_t best_sz = SIZE_MAX;
    for (VarId v : m.search_vars()) {
        const Domain& d = doms[v];
        if (d.integral && d.set.size() >= 2 && d.set.size() < best_sz) {
            best = v;
            best_sz = d.set.size();
        }
    }
    if (best >= 0) return best;
    double best_rel = 0.0;
    for (VarId v : m.search_vars()) {
        const Domain& d = doms[v];
        if (d.integral) continue;
        double w = d.box.width();
        double thresh = std::max(eps, eps * std::fabs(d.box.mid()));
        if (w <= thresh) continue;
        double rel = w / (1.0 + std::fabs(d.box.mid()));
        if (rel > best_rel) {
            best_rel = rel;
            best = v;
        }
    }
    return best;
}

Solution make_solution(const Model& m, const std::vector<Domain>& doms) {
    Solution s;
    s.assignment.reserve(doms.size());
    for (const Domain& d : doms) s.assignment.push_back(d.hull());
    if (m.objective()) s.objective_value = doms[m.objective()->var].hull();
    return s;
}

// Children of a branching step, left side first (min-value / lower half).
void branch(const std::vector<Domain>& doms, int v, std::vector<std::vector<Domain>>& out) {
    const Domain& d = doms[v];
    if (d.integral) {
        long long mv = d.set.front();
        std::vector<Domain> left = doms, right = doms;
        left[v].set = {mv};
        left[v].sync_hull();
        right[v].set.erase(right[v].set.begin());
        right[v].sync_hull();
        out.push_back(std::move(left));
        out.push_back(std::move(right));
    } else {
        double mid = d.box.mid();
        std::vector<Domain> left = doms, right = doms;
        left[v].box = Interval(d.box.lo, mid);
        right[v].box = Interval(mid, d.box.hi);
        out.push_back(std::move(left));
        out.push_back(std::move(right));
    }
}

} // namespace

Outcome solve_satisfaction(const Model& m, const SearchConfig& cfg, const std::vector<Domain>* start) {
    if (!m.finalized()) throw std::logic_error("finalize() the model before solving");
    auto t0 = Clock::now();
    std::vector<std::vector<Domain>> stack;
    stack.push_back(start ? *start : m.initial_domains());
    long long nodes = 0;
    bool limited = false;
    std::vector<std::vector<Domain>> kids;
    while (!stack.empty()) {
        if ((cfg.node_limit >= 0 && nodes >= cfg.node_limit) ||
            (cfg.time_limit_ms > 0 && elapsed_ms(t0) > cfg.time_limit_ms)) {
            limited = true;
            break;
        }
        std::vector<Domain> doms = std::move(stack.back());
        stack.pop_back();
        ++nodes;
        if (propagate(m, doms, cfg.tau_feas) == PropOutcome::Fail) continue;
        int v = pick_branch_var(m, doms, cfg.eps);
        if (v < 0) {
            Solution sol = make_solution(m, doms);
            sol.nodes = nodes;
            sol.wall_ms = elapsed_ms(t0);
            return {OutcomeKind::Feasible, std::move(sol), nodes, elapsed_ms(t0)};
        }
        kids.clear();
        branch(doms, v, kids);
        // depth-first, left child explored first
        stack.push_back(std::move(kids[1]));
        stack.push_back(std::move(kids[0]));
    }
    return {limited ? OutcomeKind::ResourceLimit : OutcomeKind::Infeasible, std::nullopt, nodes,
            elapsed_ms(t0)};
}

Outcome optimize(const Model& m, const SearchConfig& cfg, const std::vector<Domain>* start) {
    if (!m.finalized()) throw std::logic_error("finalize() the model before solving");
    if (!m.objective()) throw std::logic_error("optimize() requires an objective");
    auto t0 = Clock::now();
    const VarId ov = m.objective()->var;
    const bool minimize = m.objective()->minimize;
    // Work in minimize space: f = obj (min) or f = -obj (max).
    auto f_lo = [&](const std::vector<Domain>& d) {
        Interval h = d[ov].hull();
        return minimize ? h.lo : -h.hi;
    };
    auto f_hi = [&](const std::vector<Domain>& d) {
        Interval h = d[ov].hull();
        return minimize ? h.hi : -h.lo;
    };

    // Frames keep only the branched (search + objective) domains and are
    // re-expanded against the root box at pop time; propagation re-derives
    // everything else. This keeps the open list small even when the
    // objective bound is flat and the frontier grows wide. Ties in the bound
    // are broken toward deeper nodes so the search dives for incumbents.
    std::vector<VarId> saved_vars = m.search_vars();
    if (std::find(saved_vars.begin(), saved_vars.end(), ov) == saved_vars.end())
        saved_vars.push_back(ov);

    struct Frame {
        double key;
        int depth;
        std::vector<Domain> saved;
        bool operator<(const Frame& o) const {
            if (key != o.key) return key > o.key; // min-heap on the bound
            return depth < o.depth;               // then deepest first
        }
    };
    const std::vector<Domain> base = start ? *start : m.initial_domains();
    auto snapshot = [&](const std::vector<Domain>& doms) {
        std::vector<Domain> s;
        s.reserve(saved_vars.size());
        for (VarId v : saved_vars) s.push_back(doms[v]);
        return s;
    };
    auto expand = [&](const std::vector<Domain>& saved) {
        std::vector<Domain> doms = base;
        for (size_t i = 0; i < saved_vars.size(); ++i) doms[saved_vars[i]] = saved[i];
        return doms;
    };
    std::priority_queue<Frame> pq;
    pq.push({f_lo(base), 0, snapshot(base)});

    double inc_ub = Interval::inf(); // best leaf value (upper bound on optimum)
    double inc_lo = Interval::inf();
    std::optional<Solution> incumbent;

    // Incumbent-seeding phase: coarse-to-fine probing of point assignments of
    // the search variables. The interval lower bound of a composite statistic
    // is often flat (zero) over wide boxes, so branch-and-bound pruning only
    // bites once a near-optimal incumbent exists; probing supplies one.
    {
        std::vector<Domain> root = base;
        if (propagate(m, root, cfg.tau_feas) != PropOutcome::Fail) {
            const std::vector<VarId>& sv = m.search_vars();
            const int k = static_cast<int>(sv.size());
            int g = 6;
            while (k > 0 && std::pow(static_cast<double>(g), k) > 4096.0 && g > 2) --g;
            auto try_point = [&](const std::vector<double>& pt) {
                std::vector<Domain> doms = root;
                for (int i = 0; i < k; ++i) {
                    if (doms[sv[i]].integral) {
                        long long iv = static_cast<long long>(std::llround(pt[i]));
                        if (!doms[sv[i]].contains_int(iv)) return;
                        doms[sv[i]].set = {iv};
                        doms[sv[i]].sync_hull();
                    } else {
                        if (!doms[sv[i]].box.contains(pt[i])) return;
                        doms[sv[i]].box = Interval(pt[i]);
                    }
                }
                if (propagate(m, doms, cfg.tau_feas) == PropOutcome::Fail) return;
                if (pick_branch_var(m, doms, cfg.eps) >= 0) return;
                double hi = f_hi(doms);
                if (hi < inc_ub) {
                    inc_ub = hi;
                    inc_lo = f_lo(doms);
                    incumbent = make_solution(m, doms);
                }
            };
            std::vector<Interval> span(k);
            for (int i = 0; i < k; ++i) span[i] = root[sv[i]].hull();
            std::vector<double> best;
            for (int round = 0; round < 4 && k > 0; ++round) {
                if (cfg.time_limit_ms > 0 && elapsed_ms(t0) > 0.25 * cfg.time_limit_ms) break;
                double before = inc_ub;
                std::vector<int> idx(k, 0);
                std::vector<double> pt(k);
                for (;;) {
                    for (int i = 0; i < k; ++i) {
                        double frac = (idx[i] + 0.5) / g;
                        pt[i] = span[i].lo + frac * span[i].width();
                    }
                    double prev = inc_ub;
                    try_point(pt);
                    if (inc_ub < prev) best = pt;
                    int d = 0;
                    while (d < k && ++idx[d] == g) idx[d++] = 0;
                    if (d == k) break;
                }
                if (best.empty()) break;
                for (int i = 0; i < k; ++i) {
                    double r = span[i].width() / g;
                    span[i] = Interval(std::max(root[sv[i]].hull().lo, best[i] - r),
                                       std::min(root[sv[i]].hull().hi, best[i] + r));
                }
                if (!(inc_ub < before) && round > 0) break; // refinement stalled
            }
        }
    }
    // Minimum bound over every region discarded against the incumbent; a
    // valid global lower bound must fold these in.
    double discard_lb = Interval::inf();
    long long nodes = 0;
    bool limited = false;
    std::vector<std::vector<Domain>> kids;

    while (!pq.empty()) {
        if ((cfg.node_limit >= 0 && nodes >= cfg.node_limit) ||
            (cfg.time_limit_ms > 0 && elapsed_ms(t0) > cfg.time_limit_ms)) {
            limited = true;
            discard_lb = std::min(discard_lb, pq.top().key);
            break;
        }
        Frame fr = std::move(const_cast<Frame&>(pq.top()));
        pq.pop();
        if (incumbent && fr.key >= inc_ub - cfg.eps_obj) {
            // Best-first: every open node is at least this bad; incumbent is
            // eps_obj-optimal.
            discard_lb = std::min(discard_lb, fr.key);
            break;
        }
        // Midpoint probe of the frame: fix the non-objective search variables
        // at their box centers, let propagation carve out the objective's
        // feasible segment, and take its best end as an incumbent candidate.
        // This sidesteps the boundary cluster effect where improving leaves
        // only appear at full branching depth.
        auto probe = [&](const std::vector<Domain>& at) {
            std::vector<Domain> p = at;
            for (VarId v : m.search_vars()) {
                if (v == ov || p[v].integral) continue;
                p[v].box = Interval(p[v].box.mid());
            }
            if (propagate(m, p, cfg.tau_feas) == PropOutcome::Fail) return;
            Interval h = p[ov].hull();
            if (!p[ov].integral && h.width() > cfg.eps) {
                // bisect between the contracted optimum end (often just past
                // the boundary) and the center for the best feasible point
                double good = h.mid(), bad = minimize ? h.lo : h.hi;
                auto q = p;
                q[ov].box = Interval(good);
                if (propagate(m, q, cfg.tau_feas) == PropOutcome::Fail) return;
                p = q;
                for (int it = 0; it < 12 && std::fabs(good - bad) > cfg.eps; ++it) {
                    double t = 0.5 * (good + bad);
                    q = at; // re-fix from the unprobed frame to avoid drift
                    for (VarId v : m.search_vars())
                        if (v != ov && !q[v].integral) q[v].box = Interval(q[v].box.mid());
                    q[ov].box = Interval(t);
                    if (propagate(m, q, cfg.tau_feas) == PropOutcome::Fail) {
                        bad = t;
                    } else {
                        good = t;
                        p = q;
                    }
                }
            }
            if (pick_branch_var(m, p, cfg.eps) >= 0) return;
            double hi = f_hi(p);
            if (hi < inc_ub) {
                inc_ub = hi;
                inc_lo = f_lo(p);
                incumbent = make_solution(m, p);
            }
        };

        // Plunge: expand the frame greedily to a leaf, always descending into
        // the better-bounded child and shelving the sibling. This keeps the
        // frontier ordered best-first while producing a steady stream of
        // incumbent candidates.
        std::vector<Domain> doms = expand(fr.saved);
        double key = fr.key;
        int depth = fr.depth;
        bool fresh = true;
        for (;;) {
            ++nodes;
            // Inject the incumbent bound to sharpen propagation.
            if (incumbent) {
                Interval bound = minimize ? Interval(-Interval::inf(), inc_ub)
                                          : Interval(-inc_ub, Interval::inf());
                doms[ov].box = doms[ov].box.intersect(bound);
                if (doms[ov].integral) doms[ov].restrict_to(doms[ov].box);
                if (doms[ov].is_empty()) break;
            }
            if (propagate(m, doms, cfg.tau_feas) == PropOutcome::Fail) break;
            if (fresh) {
                probe(doms);
                fresh = false;
            }
            int v = pick_branch_var(m, doms, cfg.eps);
            if (v < 0) {
                double leaf_hi = f_hi(doms), leaf_lo = f_lo(doms);
                if (leaf_hi < inc_ub) {
                    inc_ub = leaf_hi;
                    inc_lo = leaf_lo;
                    incumbent = make_solution(m, doms);
                } else {
                    discard_lb = std::min(discard_lb, std::max(key, leaf_lo));
                }
                break;
            }
            kids.clear();
            branch(doms, v, kids);
            double k0 = std::max(key, f_lo(kids[0])), k1 = std::max(key, f_lo(kids[1]));
            int take = k0 <= k1 ? 0 : 1;
            // Guided dive: when the bound cannot tell the children apart,
            // descend toward the incumbent's coordinates.
            if (incumbent && k0 == k1 && kids[1][v].hull().contains(incumbent->assignment[v].mid()))
                take = 1;
            int shelve = 1 - take;
            double kshelve = take == 0 ? k1 : k0;
            if (!incumbent || kshelve < inc_ub - cfg.eps_obj)
                pq.push({kshelve, depth + 1, snapshot(kids[shelve])});
            else
                discard_lb = std::min(discard_lb, kshelve); // already beaten
            key = take == 0 ? k0 : k1;
            if (incumbent && key >= inc_ub - cfg.eps_obj) {
                discard_lb = std::min(discard_lb, key);
                break;
            }
            doms = std::move(kids[take]);
            ++depth;
            if (cfg.node_limit >= 0 && nodes >= cfg.node_limit) break;
            if (cfg.time_limit_ms > 0 && elapsed_ms(t0) > cfg.time_limit_ms) break;
        }
    }
    double final_lb = std::min(inc_lo, discard_lb);

    double wall = elapsed_ms(t0);
    if (!incumbent) return {limited ? OutcomeKind::ResourceLimit : OutcomeKind::Infeasible, std::nullopt, nodes, wall};
    Solution sol = std::move(*incumbent);
    double lb = std::min(final_lb, inc_ub);
    sol.objective_value = minimize ? Interval(lb, inc_ub) : Interval(-inc_ub, -lb);
    sol.nodes = nodes;
    sol.wall_ms = wall;
    return {limited ? OutcomeKind::ResourceLimit : OutcomeKind::Feasible, std::move(sol), nodes, wall};
}

} // namespace statcp
