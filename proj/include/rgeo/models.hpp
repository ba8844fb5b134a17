#pragma once
#include <map>
#include <memory>

#include "rgeo/action.hpp"
#include "rgeo/submanifold.hpp"

namespace rgeo {

// A declared stratum of a catalog model: submanifold data plus the labels
// the deformation pipelines need.
struct StratumSpec {
    std::string id;
    int descendant_number = 1;
    SubmanifoldSpec sub;
    double inj_bound = 0.0;             // declared normal injectivity radius
    double cutoff_d1 = 0.0, cutoff_d2 = 0.0;  // nonzero: cutoff band for non-compact strata
    std::string isotropy_label;
    // Lie-algebra basis (columns, lie coordinates) of the isotropy at a stratum point
    std::function<MatrixXd(const VectorXd&)> isotropy_algebra;
};

struct Model {
    std::string id;
    std::string description;
    int dim = 0;
    std::vector<MetricModel> charts;   // charts[0] is primary; sphere models ship 2
    std::function<VectorXd(const VectorXd&)> transition;   // chart <-> partner (involution)
    std::function<MatrixXd(const VectorXd&)> dtransition;  // its differential
    std::shared_ptr<GroupActionModel> action;
    std::vector<StratumSpec> strata;
    std::map<std::string, double> declared;   // hypothesis flags and bounds
    std::map<std::string, std::string> notes;

    bool has_metric() const { return !charts.empty(); }
    const MetricModel& metric() const { return charts.at(0); }
    const StratumSpec& stratum(const std::string& sid) const;
};

class Catalog {
  public:
    explicit Catalog(const std::string& data_dir = "");
    std::vector<std::string> ids() const;          // stable (file) order
    bool has(const std::string& id) const;
    const Model& get(const std::string& id) const;
    std::string describe(const std::string& id) const;
    const std::string& data_dir() const { return dir_; }

  private:
    std::string dir_;
    std::vector<std::string> order_;
    std::map<std::string, Model> models_;
};

// --data-dir flag > RGEO_DATA_DIR env > compiled default.
std::string default_data_dir();

// Chart-hopping geodesic flow on a two-chart atlas (used where a path
// leaves a single stereographic chart, e.g. full great circles).
struct AtlasState {
    int chart = 0;
    VectorXd x, v;
};
AtlasState atlas_geodesic(const Model& mod, AtlasState s, double T, int* handoffs = nullptr);

// Templated stereographic helpers shared by models and tests.
template <class T>
void sphere_embed(const T* x, int n, int chart, T* P) {
    T s2 = T(0.0);
    for (int i = 0; i < n; ++i) s2 += x[i] * x[i];
    T den = 1.0 / (1.0 + s2);
    P[0] = (chart == 0 ? (s2 - 1.0) : (1.0 - s2)) * den;
    for (int i = 0; i < n; ++i) P[i + 1] = 2.0 * x[i] * den;
}

VectorXd sphere_embed_pt(const VectorXd& x, int chart = 0);
VectorXd sphere_unembed_pt(const VectorXd& P, int chart = 0);
// pushforward of an ambient Killing matrix field P -> A P into a chart
VectorXd sphere_killing_chart(const MatrixXd& A, const VectorXd& x, int chart = 0);
// chart tangent -> ambient tangent at embed(x)
MatrixXd sphere_dembed(const VectorXd& x, int chart = 0);

}  // namespace rgeo
