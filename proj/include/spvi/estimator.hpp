#pragma once

#include <array>
#include <iosfwd>

#include "spvi/pdas.hpp"

namespace spvi {

/// Contact classification of a node. Full contact means the solution is fixed
/// to the obstacle on the whole patch and the local residual is nonnegative,
/// so refinement cannot improve the solution there. Dirichlet nodes are
/// always NoContact.
enum class NodeClass { NoContact, SemiContact, FullContact };

struct EstimatorOptions {
    double contact_tol_scale = 1e-9;  // tau_feas = scale * (1 + max finite |g|)
    double sign_tol = 1e-12;          // full-contact residual sign test
    double clip_tol = 1e-10;          // negative-radicand clipping, scaled
};

/// Which total drives marking.
enum class EstimatorChoice { Eta, EtaStd, EtaNr };

/// Per-node estimator contributions and global totals.
///
/// eta_node[k-1][p] holds eta_{k,p}; the non-robust reweighting of the first
/// three contributions is kept separately. Totals follow the definition
/// eta_k = (sum_p eta_{k,p}^2)^(1/2); eta is the plain sum over k and eta_rss
/// the root-sum-square, both reported.
struct EstimatorBreakdown {
    std::vector<NodeClass> node_class;
    Eigen::VectorXd s;                            // lumped force s_p >= 0
    std::array<Eigen::VectorXd, 7> eta_node;      // robust weights
    std::array<Eigen::VectorXd, 3> eta_nr_node;   // h_p weights for k = 1..3

    std::array<double, 7> eta_k{};                // global eta_k
    std::array<double, 3> eta_nr_k{};
    double eta = 0.0;      // sum_k eta_k
    double eta_rss = 0.0;  // (sum_k eta_k^2)^(1/2)
    double eta_std = 0.0;  // eta_1 + eta_2 + eta_3
    double eta_nr = 0.0;   // reweighted k=1..3 plus the contact terms
    double osc_f = 0.0;
    double osc_pi = 0.0;

    Eigen::VectorXd indicator_eta;  // per-element marking indicators
    Eigen::VectorXd indicator_std;
    Eigen::VectorXd indicator_nr;

    const Eigen::VectorXd& indicator(EstimatorChoice c) const {
        switch (c) {
            case EstimatorChoice::EtaStd: return indicator_std;
            case EstimatorChoice::EtaNr: return indicator_nr;
            default: return indicator_eta;
        }
    }
};

/// Signed jump residual of the piecewise gradient across interior edge s:
/// the density of [grad phi] entering the residual, positive where the kink
/// acts like a nonnegative constraining force.
double gradient_jump(const Mesh& mesh, const P1Function& phi, int s);

std::vector<NodeClass> classify_nodes(const Mesh& mesh, const PatchIndex& patches,
                                      const P1Function& phi, const Eigen::VectorXd& g_nodal,
                                      const Eigen::VectorXd& lambda, const ProblemData& data,
                                      const EstimatorOptions& opts = {});

/// eta_{1,p}, eta_{2,p}, eta_{3,p} (robust and non-robust weights) for all
/// nodes outside full contact.
void eta123(const Mesh& mesh, const PatchIndex& patches, const P1Function& phi,
            const ProblemData& data, const std::vector<NodeClass>& classes,
            std::array<Eigen::VectorXd, 7>& eta_node,
            std::array<Eigen::VectorXd, 3>& eta_nr_node);

/// Complementarity contribution eta_{4,p} at semi-contact nodes; the integral
/// runs over the patch of p with respect to two virtual red refinements.
Eigen::VectorXd eta4(const Mesh& mesh, const PatchIndex& patches, const P1Function& phi,
                     const Eigen::VectorXd& g_nodal, const Eigen::VectorXd& lambda,
                     const std::vector<NodeClass>& classes,
                     const EstimatorOptions& opts = {});

/// Obstacle-approximation contributions eta_{5,p}, eta_{6,p}, eta_{7,p}.
/// All three vanish identically when g = g_m.
void eta567(const Mesh& mesh, const PatchIndex& patches, const P1Function& phi,
            const Eigen::VectorXd& g_nodal, const Eigen::VectorXd& lambda,
            const std::vector<NodeClass>& classes, const ProblemData& data,
            std::array<Eigen::VectorXd, 7>& eta_node,
            const EstimatorOptions& opts = {});

/// Fill global totals, oscillation terms and element indicators from the
/// per-node values.
void totals(const Mesh& mesh, const PatchIndex& patches, const ProblemData& data,
            EstimatorBreakdown& breakdown);

/// Element marking indicators: each node spreads its squared contribution
/// equally over its patch elements, so sum_e indicator^2 = sum_{k,p} eta_{k,p}^2.
Eigen::VectorXd element_indicators(const Mesh& mesh, const PatchIndex& patches,
                                   const std::vector<Eigen::VectorXd*>& node_components);

/// One-shot driver: classification, all contributions, totals, indicators.
EstimatorBreakdown compute_estimator(const Mesh& mesh, const PatchIndex& patches,
                                     const DiscreteSolution& sol,
                                     const Eigen::VectorXd& g_nodal,
                                     const ProblemData& data,
                                     const EstimatorOptions& opts = {});

/// CSV export: node_id, class, s_p, eta1..eta7.
void write_breakdown_csv(const EstimatorBreakdown& b, std::ostream& os);
/// CSV export: element_id, indicator (for the given choice).
void write_indicator_csv(const EstimatorBreakdown& b, EstimatorChoice choice, std::ostream& os);

}  // namespace spvi
