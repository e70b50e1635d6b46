#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "logens/baseline.hpp"
#include "logens/errors.hpp"
#include "logens/interpret.hpp"
#include "logens/metrics.hpp"
#include "logens/pipeline.hpp"
#include "logens/serialize.hpp"

namespace py = pybind11;
using namespace logens;

namespace {

std::vector<int> as_ints(std::span<const int> s) { return {s.begin(), s.end()}; }

py::dict fit_info_dict(const LogitModel& m) {
  py::dict d;
  d["intercept"] = m.intercept;
  d["features"] = m.features;
  d["coefficients"] = m.coefficients;
  d["std_errors"] = m.info.std_errors;
  d["p_values"] = m.info.p_values;
  d["log_likelihood"] = m.info.log_likelihood;
  d["iterations"] = m.info.iterations;
  d["converged"] = m.info.converged;
  d["separated"] = m.info.separated;
  d["eliminated"] = m.info.eliminated;
  return d;
}

py::dict solution_dict(const WeightSolution& w) {
  py::dict d;
  d["weights"] = w.lambda;
  d["objective"] = w.objective;
  d["support"] = w.support;
  d["kkt_residual"] = w.kkt_residual;
  d["iterations"] = w.iterations;
  d["converged"] = w.converged;
  return d;
}

py::dict report_dict(const EvaluationReport& r) {
  py::dict d;
  d["ks"] = r.ks;
  d["ks_decile"] = r.ks_decile;
  d["concordant_pct"] = r.concordant_pct;
  d["discordant_pct"] = r.discordant_pct;
  d["tied_pct"] = r.tied_pct;
  d["n_rows"] = r.n_rows;
  d["n_events"] = r.n_events;
  return d;
}

Dataset make_dataset(std::vector<std::string> names, Eigen::MatrixXd values, std::vector<int> labels,
                     std::optional<std::vector<int>> periods, std::optional<std::vector<std::string>> ids) {
  const auto n = labels.size();
  std::vector<int> p = periods ? std::move(*periods) : std::vector<int>(n, 0);
  std::vector<std::string> r;
  if (ids) {
    r = std::move(*ids);
  } else {
    for (std::size_t i = 0; i < n; ++i) r.push_back(std::to_string(i));
  }
  return Dataset(std::move(names), std::move(values), std::move(labels), std::move(p), std::move(r));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Logistic ensembles with simplex-constrained weights";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("feature_names"), py::arg("values"), py::arg("labels"),
           py::arg("periods") = py::none(), py::arg("record_ids") = py::none())
      .def_static(
          "from_csv",
          [](const std::filesystem::path& path, std::string label, std::string period, std::string id) {
            return load_csv(path, Schema{label, period, id});
          },
          py::arg("path"), py::arg("label_col") = "label", py::arg("period_col") = "period",
          py::arg("id_col") = "record_id")
      .def("to_csv", [](const Dataset& d, const std::filesystem::path& p) { write_csv(d, p); })
      .def_property_readonly("feature_names", &Dataset::feature_names)
      .def_property_readonly("values", &Dataset::values)
      .def_property_readonly("labels", [](const Dataset& d) { return as_ints(d.labels()); })
      .def_property_readonly("periods", [](const Dataset& d) { return as_ints(d.periods()); })
      .def_property_readonly("record_ids", [](const Dataset& d) {
        return std::vector<std::string>(d.record_ids().begin(), d.record_ids().end());
      })
      .def("row", &Dataset::row)
      .def("period_subset", &Dataset::period_subset)
      .def("__len__", &Dataset::rows)
      .def("__repr__", [](const Dataset& d) {
        return "<Dataset rows=" + std::to_string(d.rows()) + " features=" + std::to_string(d.num_features()) + ">";
      });

  m.def(
      "generate_synthetic",
      [](std::size_t rows, std::size_t features, std::size_t periods, std::uint64_t seed, double drift,
         double base_rate, double correlation, std::size_t nonlinear, double prior_default_rate,
         double missing_rate) {
        SynthConfig c;
        c.rows = rows;
        c.features = features;
        c.periods = periods;
        c.rng_seed = seed;
        c.drift = drift;
        c.base_rate = base_rate;
        c.correlation = correlation;
        c.nonlinear_features = nonlinear;
        c.prior_default_rate = prior_default_rate;
        c.missing_rate = missing_rate;
        return generate_synthetic(c).data;
      },
      py::arg("rows") = 20000, py::arg("features") = 40, py::arg("periods") = 4, py::arg("seed") = 7,
      py::arg("drift") = 0.05, py::arg("base_rate") = 0.10, py::arg("correlation") = 0.3,
      py::arg("nonlinear_features") = 4, py::arg("prior_default_rate") = 0.0, py::arg("missing_rate") = 0.0);

  m.def(
      "prepare",
      [](const Dataset& raw, double train_fraction, std::uint64_t seed, bool stratify,
         std::optional<std::vector<int>> periods) {
        PrepOptions o;
        o.split.train_fraction = train_fraction;
        o.split.rng_seed = seed;
        o.split.stratify_by_label = stratify;
        o.periods = std::move(periods);
        auto p = prepare(raw, o);
        return py::make_tuple(std::move(p.train), std::move(p.holdout));
      },
      py::arg("data"), py::arg("train_fraction") = 0.7, py::arg("seed") = 42, py::arg("stratify") = true,
      py::arg("periods") = py::none(), "Clean, split and impute; returns (train, holdout).");

  m.def(
      "fit_logit",
      [](const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::optional<std::vector<std::string>> names,
         std::optional<double> alpha) {
        std::vector<std::string> n;
        if (names) {
          n = std::move(*names);
        } else {
          for (Eigen::Index j = 0; j < x.cols(); ++j) n.push_back("x" + std::to_string(j));
        }
        if (!alpha) return fit_info_dict(fit_design(x, y, n));
        EliminationOptions e;
        e.alpha = *alpha;
        return fit_info_dict(backward_eliminate_design(x, y, n, e));
      },
      py::arg("x"), py::arg("y"), py::arg("names") = py::none(), py::arg("alpha") = py::none(),
      "Maximum-likelihood logistic fit; with alpha, backward elimination at that level.");

  m.def("project_to_simplex", &project_to_simplex);
  m.def(
      "solve_weights",
      [](const Eigen::MatrixXd& p, const Eigen::VectorXd& y, double tol, int max_iter) {
        SolverOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        return solution_dict(solve_simplex_qp(build_gram(p, y), o));
      },
      py::arg("predictions"), py::arg("target"), py::arg("tol") = 1e-10, py::arg("max_iter") = 200000,
      "Least-squares weights on the probability simplex.");

  m.def("ks_statistic", [](const std::vector<double>& s, const std::vector<int>& y) { return ks_statistic(s, y); });
  m.def("concordance", [](const std::vector<double>& s, const std::vector<int>& y) {
    const auto c = concordance(s, y);
    return py::make_tuple(c.concordant, c.discordant, c.tied);
  });
  m.def("evaluate", [](const std::vector<double>& s, const std::vector<int>& y) {
    return report_dict(evaluate(s, y));
  });

  py::class_<EnsembleModel>(m, "Ensemble")
      .def_property_readonly("weights",
                             [](const EnsembleModel& e) {
                               std::vector<double> w;
                               for (const auto& mem : e.members()) w.push_back(mem.weight);
                               return w;
                             })
      .def_property_readonly("required_features", &EnsembleModel::required_features)
      .def_property_readonly("solver", [](const EnsembleModel& e) {
        py::dict d;
        d["objective"] = e.solver.objective;
        d["kkt_residual"] = e.solver.kkt_residual;
        d["pool_size"] = e.solver.pool_size;
        d["support"] = e.solver.support;
        return d;
      })
      .def("score", py::overload_cast<const EnsembleModel&, const Dataset&>(&score))
      .def("score_row", py::overload_cast<const EnsembleModel&, const FeatureRow&>(&score))
      .def("member_scores", &member_scores)
      .def("sensitivity", &sensitivity, py::arg("row"), py::arg("feature"))
      .def(
          "reason_codes",
          [](const EnsembleModel& e, const FeatureRow& row, const std::map<std::string, double, std::less<>>& deltas,
             int top_n) {
            py::list out;
            for (const auto& c : reason_codes(e, row, deltas, top_n))
              out.append(py::make_tuple(c.feature, c.delta_p, c.sensitivity, c.delta_x));
            return out;
          },
          py::arg("row"), py::arg("deltas") = std::map<std::string, double, std::less<>>{}, py::arg("top_n") = 5)
      .def("reference_row",
           [](const EnsembleModel& e, const std::string& which) {
             if (which != "mean" && which != "median") throw ConfigError("reference must be 'mean' or 'median'");
             return reference_row(e, which == "mean" ? ReferencePoint::mean : ReferencePoint::median);
           })
      .def("to_json", [](const EnsembleModel& e) { return dump(ensemble_to_json(e)); })
      .def_static("from_json", [](const std::string& s) { return ensemble_from_json(json::parse(s)); });

  m.def(
      "train_ensemble",
      [](const Dataset& train, int samples, double fraction, double alpha, std::uint64_t seed, unsigned workers) {
        PoolConfig c;
        c.samples_per_period = samples;
        c.feature_fraction = fraction;
        c.alpha = alpha;
        c.rng_seed = seed;
        TrainPoolOptions o;
        o.workers = workers;
        py::gil_scoped_release release;
        return train_ensemble(train, c, o).model;
      },
      py::arg("train"), py::arg("samples_per_period") = 40, py::arg("feature_fraction") = 0.25,
      py::arg("alpha") = 0.05, py::arg("seed") = 7, py::arg("workers") = 1);

  py::class_<BaseModel>(m, "BaseModel")
      .def_property_readonly("required_features", &BaseModel::required_features)
      .def("score", &BaseModel::score)
      .def("score_row", &BaseModel::predict)
      .def("to_json", [](const BaseModel& b) { return dump(base_model_to_json(b)); })
      .def_static("from_json", [](const std::string& s) { return base_model_from_json(json::parse(s)); });

  m.def(
      "train_baseline",
      [](const Dataset& train, int bins, std::vector<std::string> passthrough) {
        return train_base_model(train, default_baseline_config(train, passthrough, bins));
      },
      py::arg("train"), py::arg("bins") = 10, py::arg("passthrough") = std::vector<std::string>{});
}
