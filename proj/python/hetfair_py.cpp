#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "hetfair/edit_log.hpp"
#include "hetfair/error.hpp"
#include "hetfair/graph.hpp"
#include "hetfair/homophily.hpp"
#include "hetfair/metrics.hpp"
#include "hetfair/node_table.hpp"
#include "hetfair/rewire.hpp"
#include "hetfair/split.hpp"
#include "hetfair/synthetic.hpp"
#include "hetfair/theory.hpp"

namespace py = pybind11;
using namespace hetfair;

namespace {

PredictionTable make_predictions(std::vector<ClassId> y_true, std::vector<ClassId> y_pred,
                                 std::vector<ClassId> sensitive) {
  if (y_true.size() != y_pred.size() || y_pred.size() != sensitive.size()) {
    throw Error("y_true, y_pred and sensitive must have the same length");
  }
  PredictionTable p;
  p.node_ids.resize(y_pred.size());
  for (std::size_t i = 0; i < p.node_ids.size(); ++i) p.node_ids[i] = static_cast<NodeId>(i);
  p.y_true = std::move(y_true);
  p.y_pred = std::move(y_pred);
  p.sensitive = std::move(sensitive);
  return p;
}

std::string edit_log_text(const EditLog& log) {
  std::ostringstream out;
  write_edit_log(log, out);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_hetfair, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<Edge>(m, "Edge")
      .def(py::init([](NodeId u, NodeId v) { return Edge{u, v}; }), py::arg("u"), py::arg("v"))
      .def_readwrite("u", &Edge::u)
      .def_readwrite("v", &Edge::v)
      .def("__repr__", [](const Edge& e) { return "Edge(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")"; });

  py::class_<Graph>(m, "Graph")
      .def(py::init([](std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& pairs) {
             std::vector<Edge> edges;
             edges.reserve(pairs.size());
             for (const auto& [u, v] : pairs) edges.push_back({u, v});
             return Graph::from_edges(n, edges);
           }),
           py::arg("node_count"), py::arg("edges"))
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def("degree", &Graph::degree)
      .def("neighbors", [](const Graph& g, NodeId v) {
        const auto n = g.neighbors(v);
        return std::vector<NodeId>(n.begin(), n.end());
      })
      .def("has_edge", &Graph::has_edge)
      .def("edges", [](const Graph& g) {
        std::vector<std::pair<NodeId, NodeId>> out;
        for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v);
        return out;
      })
      .def(py::self == py::self);

  py::class_<NodeTable>(m, "NodeTable")
      .def(py::init([](std::vector<ClassId> labels, std::vector<ClassId> sensitive) {
             return NodeTable(std::move(labels), std::move(sensitive));
           }),
           py::arg("labels"), py::arg("sensitive"))
      .def("__len__", &NodeTable::size)
      .def("label", &NodeTable::label)
      .def("sensitive", py::overload_cast<NodeId>(&NodeTable::sensitive, py::const_))
      .def_property_readonly("class_count", &NodeTable::class_count);

  m.def("load_edge_list", [](const std::filesystem::path& path, bool one_indexed) {
    return load_edge_list(path, one_indexed).graph;
  }, py::arg("path"), py::arg("one_indexed") = false);
  m.def("load_node_table", &load_node_table, py::arg("path"));

  py::class_<Histogram>(m, "Histogram")
      .def(py::init<std::vector<double>>(), py::arg("mass"))
      .def_property_readonly("bins", &Histogram::bins)
      .def_property_readonly("mass", [](const Histogram& h) { return std::vector<double>(h.mass().begin(), h.mass().end()); })
      .def("mean", &Histogram::mean)
      .def("__getitem__", &Histogram::operator[])
      .def("__len__", &Histogram::bins);

  py::class_<BetaGoal>(m, "BetaGoal")
      .def(py::init([](double a, double b) { return BetaGoal{a, b}; }), py::arg("alpha"), py::arg("beta"))
      .def_readwrite("alpha", &BetaGoal::alpha)
      .def_readwrite("beta", &BetaGoal::beta);

  m.def("global_homophily", &global_homophily, py::arg("graph"), py::arg("table"));
  m.def("local_homophily", &local_homophily_all, py::arg("graph"), py::arg("table"),
        "Per-node ratio of same-label neighbors; None for isolated nodes.");
  m.def("histogram", [](const std::vector<std::optional<double>>& ratios, std::size_t bins) {
    return histogram(std::span<const std::optional<double>>(ratios), bins);
  }, py::arg("ratios"), py::arg("bins") = 10);
  m.def("beta_goal_histogram", &beta_goal_histogram, py::arg("goal"), py::arg("bins") = 10);
  m.def("emd", &emd, py::arg("p"), py::arg("q"));

  py::class_<GenerationReport>(m, "GenerationReport")
      .def_readonly("emd_original_goal", &GenerationReport::emd_original_goal)
      .def_readonly("emd_generated_goal", &GenerationReport::emd_generated_goal)
      .def_readonly("edits_rewire", &GenerationReport::edits_rewire)
      .def_readonly("edits_refine", &GenerationReport::edits_refine)
      .def_readonly("nodes_targeted", &GenerationReport::nodes_targeted)
      .def_readonly("degree_delta_histogram", &GenerationReport::degree_delta_histogram)
      .def_readonly("reverted", &GenerationReport::reverted);

  m.def("generate", [](const Graph& g, const NodeTable& t, const BetaGoal& goal, std::size_t bins, std::uint64_t seed) {
    GenerationResult r = generate(g, t, goal, bins, seed);
    return py::make_tuple(std::move(r.graph), r.report, edit_log_text(r.log));
  }, py::arg("graph"), py::arg("table"), py::arg("goal"), py::arg("bins") = 10, py::arg("seed") = 0,
        "Returns (generated graph, report, edit log as JSON lines).");

  m.def("planted_partition", [](std::size_t n, std::size_t classes, double mean_degree, double h, std::uint64_t seed) {
    LabeledGraph lg = planted_partition(n, classes, mean_degree, h, seed);
    return py::make_tuple(std::move(lg.graph), std::move(lg.table));
  }, py::arg("nodes"), py::arg("classes"), py::arg("mean_degree"), py::arg("homophily"), py::arg("seed") = 0);

  py::class_<SplitAssignment>(m, "SplitAssignment")
      .def_property_readonly("tags", [](const SplitAssignment& s) {
        std::vector<std::string> out;
        out.reserve(s.tags.size());
        for (SplitTag t : s.tags) out.emplace_back(to_string(t));
        return out;
      })
      .def_readonly("gamma", &SplitAssignment::gamma)
      .def_readonly("train_weight", &SplitAssignment::train_weight)
      .def_readonly("per_bin_train_share", &SplitAssignment::per_bin_train_share)
      .def_readonly("emd_train_test", &SplitAssignment::emd_train_test);

  m.def("stratified_split", [](const std::vector<std::optional<double>>& ratios, double gamma, std::size_t bins,
                               double train_frac, double val_frac, std::uint64_t seed) {
    return stratified_split(ratios, SplitOptions{gamma, bins, train_frac, val_frac, seed});
  }, py::arg("ratios"), py::arg("gamma") = 0.0, py::arg("bins") = 10, py::arg("train_frac") = 0.8,
        py::arg("val_frac") = 0.2, py::arg("seed") = 0);

  m.def("statistical_parity", [](std::vector<ClassId> y_true, std::vector<ClassId> y_pred,
                                 std::vector<ClassId> sensitive, ClassId preferred) {
    return statistical_parity(make_predictions(std::move(y_true), std::move(y_pred), std::move(sensitive)), preferred);
  }, py::arg("y_true"), py::arg("y_pred"), py::arg("sensitive"), py::arg("preferred") = 1);
  m.def("multiclass_sp", [](std::vector<ClassId> y_true, std::vector<ClassId> y_pred,
                            std::vector<ClassId> sensitive, bool pairwise) {
    return multiclass_sp(make_predictions(std::move(y_true), std::move(y_pred), std::move(sensitive)),
                         pairwise ? MulticlassSpMode::kPairwise : MulticlassSpMode::kOneVsRest);
  }, py::arg("y_true"), py::arg("y_pred"), py::arg("sensitive"), py::arg("pairwise") = false);
  m.def("micro_f1", [](std::vector<ClassId> y_true, std::vector<ClassId> y_pred, std::vector<ClassId> sensitive) {
    return micro_f1(make_predictions(std::move(y_true), std::move(y_pred), std::move(sensitive)));
  }, py::arg("y_true"), py::arg("y_pred"), py::arg("sensitive"));

  py::class_<theory::TheoryParams>(m, "TheoryParams")
      .def(py::init<>())
      .def_readwrite("n", &theory::TheoryParams::n)
      .def_readwrite("k", &theory::TheoryParams::k)
      .def_readwrite("d", &theory::TheoryParams::d)
      .def_readwrite("h", &theory::TheoryParams::h)
      .def_readwrite("alpha_shift", &theory::TheoryParams::alpha_shift)
      .def_readwrite("mu_l", &theory::TheoryParams::mu_l)
      .def_readwrite("mu_s", &theory::TheoryParams::mu_s)
      .def_readwrite("sigma_l", &theory::TheoryParams::sigma_l)
      .def_readwrite("sigma_s", &theory::TheoryParams::sigma_s)
      .def_readwrite("lambda_reg", &theory::TheoryParams::lambda_reg);

  m.def("expected_logit_gap", &theory::expected_logit_gap, py::arg("params"));
  m.def("monte_carlo_gap", [](const theory::TheoryParams& p, std::size_t trials, std::uint64_t seed) {
    const theory::TheoryResult r = theory::monte_carlo_gap(p, trials, seed);
    py::dict d;
    d["closed_form_gap"] = r.closed_form_gap;
    d["composed_gap"] = r.composed_gap;
    d["mc_gap_mean"] = r.mc_gap_mean;
    d["mc_gap_stderr"] = r.mc_gap_stderr;
    d["trials"] = r.trials;
    return d;
  }, py::arg("params"), py::arg("trials"), py::arg("seed") = 0);
}
