#include "entropic/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace entropic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Transportation network simplex on the bipartite graph of supported
// sources and sinks. The basis is a spanning tree of ns + nt - 1 arcs.
class TransportSimplex {
public:
    TransportSimplex(const Eigen::MatrixXd& cost, std::vector<double> supply,
                     std::vector<double> demand)
        : cost_(cost), supply_(std::move(supply)), demand_(std::move(demand)),
          ns_(static_cast<int>(supply_.size())), nt_(static_cast<int>(demand_.size())) {}

    void solve() {
        build_initial_basis();
        const double scale = 1.0 + cost_.cwiseAbs().maxCoeff();
        const double opt_tol = 1e-13 * scale;
        const long max_pivots = 200L * (ns_ + nt_) * (ns_ + nt_) + 10000L;
        long degenerate_run = 0;

        for (long pivot = 0; pivot < max_pivots; ++pivot) {
            compute_duals();
            const bool bland = degenerate_run > 2L * (ns_ + nt_);
            int ei = -1, ej = -1;
            if (bland) {
                // anti-cycling fallback: first eligible arc in a fixed order
                for (int i = 0; i < ns_ && ei < 0; ++i)
                    for (int j = 0; j < nt_; ++j)
                        if (cost_(i, j) - u_[i] - v_[j] < -opt_tol) {
                            ei = i;
                            ej = j;
                            break;
                        }
            } else {
                double best = -opt_tol;
                for (int i = 0; i < ns_; ++i)
                    for (int j = 0; j < nt_; ++j) {
                        const double rc = cost_(i, j) - u_[i] - v_[j];
                        if (rc < best) {
                            best = rc;
                            ei = i;
                            ej = j;
                        }
                    }
            }
            if (ei < 0) return;  // optimal
            const double theta = pivot_on(ei, ej, bland);
            degenerate_run = theta > 0.0 ? 0 : degenerate_run + 1;
        }
        throw Error("internal-check-failed", "network simplex exceeded its pivot budget");
    }

    Eigen::MatrixXd flows() const {
        Eigen::MatrixXd f = Eigen::MatrixXd::Zero(ns_, nt_);
        for (const Arc& a : arcs_)
            if (a.active) f(a.src, a.snk) = a.flow;
        return f;
    }
    const std::vector<double>& source_duals() const { return u_; }
    const std::vector<double>& sink_duals() const { return v_; }

    double max_negative_reduced_cost() const {
        double worst = 0.0;
        for (int i = 0; i < ns_; ++i)
            for (int j = 0; j < nt_; ++j)
                worst = std::min(worst, cost_(i, j) - u_[i] - v_[j]);
        return worst;
    }

private:
    struct Arc {
        int src = 0, snk = 0;
        double flow = 0.0;
        bool active = false;
    };

    void add_arc(int i, int j, double flow) {
        Arc a;
        a.src = i;
        a.snk = j;
        a.flow = flow;
        a.active = true;
        adjacency_[i].push_back(static_cast<int>(arcs_.size()));
        adjacency_[ns_ + j].push_back(static_cast<int>(arcs_.size()));
        arcs_.push_back(a);
    }

    // Northwest-corner start: ns + nt - 1 basic cells, degenerate zeros allowed.
    void build_initial_basis() {
        adjacency_.assign(ns_ + nt_, {});
        arcs_.clear();
        int i = 0, j = 0;
        double arem = supply_[0], brem = demand_[0];
        while (true) {
            const double t = std::min(arem, brem);
            add_arc(i, j, t);
            arem -= t;
            brem -= t;
            if (i == ns_ - 1 && j == nt_ - 1) break;
            if ((arem <= brem && i < ns_ - 1) || j == nt_ - 1) {
                ++i;
                arem = supply_[i];
            } else {
                ++j;
                brem = demand_[j];
            }
        }
        u_.assign(ns_, 0.0);
        v_.assign(nt_, 0.0);
        parent_.assign(ns_ + nt_, -1);
        parent_arc_.assign(ns_ + nt_, -1);
        order_.reserve(ns_ + nt_);
    }

    // Root the tree at node 0 and read off duals: u + v = c on basic arcs.
    void compute_duals() {
        const int nn = ns_ + nt_;
        std::fill(parent_.begin(), parent_.end(), -1);
        std::fill(parent_arc_.begin(), parent_arc_.end(), -1);
        order_.clear();
        order_.push_back(0);
        parent_[0] = 0;
        u_[0] = 0.0;
        for (std::size_t head = 0; head < order_.size(); ++head) {
            const int node = order_[head];
            for (int arc_id : adjacency_[node]) {
                const Arc& a = arcs_[arc_id];
                if (!a.active) continue;
                const int other = (node == a.src) ? ns_ + a.snk : a.src;
                if (parent_[other] >= 0) continue;
                parent_[other] = node;
                parent_arc_[other] = arc_id;
                if (other >= ns_)
                    v_[other - ns_] = cost_(a.src, a.snk) - u_[a.src];
                else
                    u_[other] = cost_(a.src, a.snk) - v_[a.snk];
                order_.push_back(other);
            }
        }
        if (static_cast<int>(order_.size()) != nn)
            throw Error("internal-check-failed", "basis lost tree connectivity");
    }

    // Push flow around the unique cycle closed by the entering arc (ei, ej).
    double pivot_on(int ei, int ej, bool bland) {
        const int a_node = ei, b_node = ns_ + ej;
        // Path from each endpoint to the root, then splice at the meeting point.
        std::vector<int> depth(ns_ + nt_, -1);
        for (std::size_t k = 0; k < order_.size(); ++k) {
            const int node = order_[k];
            depth[node] = (node == 0) ? 0 : depth[parent_[node]] + 1;
        }
        std::vector<int> arcs_a, arcs_b;  // tree arcs along the two legs
        int x = a_node, y = b_node;
        while (x != y) {
            if (depth[x] >= depth[y]) {
                arcs_a.push_back(parent_arc_[x]);
                x = parent_[x];
            } else {
                arcs_b.push_back(parent_arc_[y]);
                y = parent_[y];
            }
        }
        // Cycle node order: a_node -> ... -> meet -> ... -> b_node -> a_node.
        std::vector<int> cycle = arcs_a;
        cycle.insert(cycle.end(), arcs_b.rbegin(), arcs_b.rend());

        // The entering arc carries +theta from source ei to sink ej. Walking
        // the tree path back from the sink side, signs alternate starting
        // with a decrease on the arc adjacent to b_node (bipartite paths
        // alternate source/sink strictly).
        std::vector<int> decreasing;
        {
            bool decrease = true;
            for (auto it = cycle.rbegin(); it != cycle.rend(); ++it) {
                if (decrease) decreasing.push_back(*it);
                decrease = !decrease;
            }
        }
        double theta = kInf;
        int leaving = -1;
        for (int arc_id : decreasing) {
            const double fl = arcs_[arc_id].flow;
            if (fl < theta) {
                theta = fl;
                leaving = arc_id;
            } else if (fl == theta && leaving >= 0) {
                if (bland ? arc_id < leaving : true) leaving = arc_id;
            }
        }
        if (leaving < 0) throw Error("internal-check-failed", "pivot found no leaving arc");

        {
            bool decrease = true;
            for (auto it = cycle.rbegin(); it != cycle.rend(); ++it) {
                arcs_[*it].flow += decrease ? -theta : theta;
                decrease = !decrease;
            }
        }
        arcs_[leaving].active = false;
        arcs_[leaving].flow = 0.0;
        add_arc(ei, ej, theta);
        return theta;
    }

    const Eigen::MatrixXd& cost_;
    std::vector<double> supply_, demand_;
    int ns_, nt_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<double> u_, v_;
    std::vector<int> parent_, parent_arc_;
    std::vector<int> order_;
};

}  // namespace

ScalarField c_transform(const Space& space, const ScalarField& phi) {
    const int n = space.size();
    if (phi.size() != n) throw Error("invalid-input", "field length mismatch");
    bool any_finite = false;
    for (int i = 0; i < n; ++i)
        if (phi[i] != -kInf) any_finite = true;
    if (!any_finite) throw Error("invalid-potential", "potential is -inf everywhere");

    const auto& d = space.distance();
    ScalarField out(n);
    for (int x = 0; x < n; ++x) {
        double best = kInf;
        for (int y = 0; y < n; ++y) {
            if (phi[y] == -kInf) continue;
            const double cand = 0.5 * d(x, y) * d(x, y) - phi[y];
            if (cand < best) best = cand;
        }
        out[x] = best;
    }
    return out;
}

ScalarField hopf_lax(const Space& space, const ScalarField& f, double t) {
    if (!(t > 0.0)) throw Error("invalid-time", "Hopf-Lax requires t > 0");
    const int n = space.size();
    if (f.size() != n) throw Error("invalid-input", "field length mismatch");
    const auto& d = space.distance();
    ScalarField out(n);
    for (int x = 0; x < n; ++x) {
        double best = kInf;
        for (int y = 0; y < n; ++y) {
            const double cand = d(x, y) * d(x, y) / (2.0 * t) + f[y];
            if (cand < best) best = cand;
        }
        out[x] = best;
    }
    return out;
}

double c_concavity_defect(const Space& space, const ScalarField& phi) {
    ScalarField twice = c_transform(space, c_transform(space, phi));
    double worst = 0.0;
    for (int i = 0; i < space.size(); ++i)
        if (phi[i] != -kInf) worst = std::max(worst, std::abs(twice[i] - phi[i]));
    return worst;
}

PotentialAudit audit_kantorovich_potential(const Space& space, const ScalarField& phi,
                                           const Density& rho0, const Density& rho1,
                                           double w2_squared, double tol) {
    PotentialAudit audit;
    ScalarField phic = c_transform(space, phi);
    ScalarField twice = c_transform(space, phic);

    double dual = 0.0;
    for (int i = 0; i < space.size(); ++i) {
        const double m = space.measure()[i];
        if (rho0.values[i] > 0.0) {
            if (phi[i] == -kInf) {
                audit.cc_defect = kInf;
                audit.dual_gap = kInf;
                return audit;
            }
            audit.cc_defect = std::max(audit.cc_defect, std::abs(twice[i] - phi[i]));
            dual += phi[i] * rho0.values[i] * m;
        }
        if (rho1.values[i] > 0.0) dual += phic[i] * rho1.values[i] * m;
    }
    audit.dual_gap = std::abs(dual - 0.5 * w2_squared);
    audit.accepted = audit.cc_defect <= tol && audit.dual_gap <= tol;
    return audit;
}

OtSolution solve_w2_exact(const Space& space, const Density& rho0, const Density& rho1,
                          int node_limit) {
    const int n = space.size();
    if (n > node_limit) throw Error("problem-too-large", "node count exceeds the LP limit");
    const auto& m = space.measure();
    const auto& d = space.distance();

    Eigen::VectorXd a_full = rho0.values.cwiseProduct(m);
    Eigen::VectorXd b_full = rho1.values.cwiseProduct(m);
    const double mass_a = a_full.sum(), mass_b = b_full.sum();
    if (std::abs(mass_a - mass_b) > 1e-8)
        throw Error("infeasible", "marginal masses differ beyond tolerance");
    b_full *= mass_a / mass_b;

    std::vector<int> sources, sinks;
    for (int i = 0; i < n; ++i)
        if (a_full[i] > 0.0) sources.push_back(i);
    for (int j = 0; j < n; ++j)
        if (b_full[j] > 0.0) sinks.push_back(j);
    const int ns = static_cast<int>(sources.size());
    const int nt = static_cast<int>(sinks.size());

    Eigen::MatrixXd cost(ns, nt);
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nt; ++j) {
            const double dist = d(sources[i], sinks[j]);
            cost(i, j) = 0.5 * dist * dist;
        }
    std::vector<double> supply(ns), demand(nt);
    for (int i = 0; i < ns; ++i) supply[i] = a_full[sources[i]];
    for (int j = 0; j < nt; ++j) demand[j] = b_full[sinks[j]];

    TransportSimplex simplex(cost, supply, demand);
    simplex.solve();
    Eigen::MatrixXd flow = simplex.flows();

    OtSolution sol;
    sol.plan.weights = Eigen::MatrixXd::Zero(n, n);
    double primal = 0.0;
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nt; ++j) {
            const double f = flow(i, j);
            if (f > 0.0) {
                sol.plan.weights(sources[i], sinks[j]) = f;
                primal += f * cost(i, j);
            }
        }
    sol.w2_squared = 2.0 * primal;

    // Duals: extend the sink potential by a -inf sentinel off supp(rho1),
    // take one c-transform to get a c-concave phi on every node, then
    // recompute phi^c exactly from it.
    ScalarField v_ext = ScalarField::Constant(n, -kInf);
    for (int j = 0; j < nt; ++j) v_ext[sinks[j]] = simplex.sink_duals()[j];
    sol.dual_phi = c_transform(space, v_ext);
    sol.dual_phi_c = c_transform(space, sol.dual_phi);

    const double dual =
        a_full.dot(sol.dual_phi) + b_full.dot(sol.dual_phi_c);
    sol.duality_gap = std::abs(primal - dual);

    // Complementary-slackness audit against degeneracy.
    const double slack_tol = 1e-8 * (1.0 + primal);
    if (sol.duality_gap > slack_tol)
        throw Error("internal-check-failed", "transport duality audit failed");
    if (simplex.max_negative_reduced_cost() < -1e-9 * (1.0 + cost.cwiseAbs().maxCoeff()))
        throw Error("internal-check-failed", "negative reduced cost after optimality");
    return sol;
}

}  // namespace entropic
