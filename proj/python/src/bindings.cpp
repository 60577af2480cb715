#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "kgfuse/enrich_task.hpp"
#include "kgfuse/error.hpp"
#include "kgfuse/model.hpp"
#include "kgfuse/pipeline.hpp"
#include "kgfuse/service.hpp"

namespace py = pybind11;
using namespace kgfuse;

namespace {

// Results cross the boundary as plain dicts, the same shape the HTTP service returns.
py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// Python-side handle: owns the index so the engine's pointers stay valid.
class Index {
 public:
  Index(const PipelineConfig& cfg, std::optional<std::string> snapshot)
      : ix_(open_index(cfg, snapshot.value_or(cfg.snapshot_path()))) {}

  py::object search_text(const std::string& q) const {
    SearchResult r;
    {
      py::gil_scoped_release release;
      r = ix_.engine->search_text(q);
    }
    return to_py(result_to_json(r, *ix_.graph));
  }
  py::object search_code(const std::string& code) const {
    SearchResult r;
    {
      py::gil_scoped_release release;
      r = ix_.engine->search_code(code);
    }
    return to_py(result_to_json(r, *ix_.graph));
  }
  py::object node(const std::string& id) const {
    const Node* n = ix_.graph->node(id);
    if (!n) throw Error(ErrorCode::kUnknownNode, "no node " + id);
    return to_py(node_to_json(*n));
  }
  py::object fragment(const std::vector<std::string>& anchors, std::optional<int> radius,
                      std::optional<std::size_t> budget) const {
    return to_py(fragment_to_json(ix_.engine->fragment(anchors, radius, budget), *ix_.graph));
  }
  py::dict stats() const {
    const GraphStats s = graph_stats(*ix_.graph);
    py::dict d;
    d["api_nodes"] = s.api_nodes;
    d["task_nodes"] = s.task_nodes;
    d["edges"] = s.edges_by_label;
    return d;
  }
  py::tuple request(const std::string& method, const std::string& path, std::map<std::string, std::string> params,
                    const std::string& body) const {
    const ServiceResponse r = handle_request(*ix_.engine, {method, path, std::move(params), body});
    return py::make_tuple(r.status, py::module_::import("json").attr("loads")(r.body));
  }
  std::size_t node_count() const { return ix_.graph->nodes().size(); }

 private:
  SearchIndex ix_;
};

py::dict summary_dict(const StageSummary& s) {
  py::dict d;
  d["stage"] = s.stage;
  py::dict counts;
  for (const auto& [k, v] : s.counts) counts[py::str(k)] = v;
  d["counts"] = counts;
  d["diagnostics"] = s.diagnostics;
  d["artifact"] = s.artifact;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the kgfuse library";
  m.attr("__version__") = KGFUSE_VERSION;

  static py::exception<Error> error(m, "KgfuseError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(py::str(e.what()));
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<PipelineConfig>(m, "Config")
      .def_static("load", &PipelineConfig::load, py::arg("path"))
      .def_static("parse", &PipelineConfig::parse, py::arg("text"), py::arg("base_dir"))
      .def_readwrite("work_dir", &PipelineConfig::work_dir)
      .def_readwrite("snapshot", &PipelineConfig::snapshot)
      .def_property(
          "seed", [](const PipelineConfig& c) { return c.embedding.seed; },
          [](PipelineConfig& c, std::uint64_t v) { c.embedding.seed = v; })
      .def_property(
          "align_threshold", [](const PipelineConfig& c) { return c.enrich.align_threshold; },
          [](PipelineConfig& c, double v) { c.enrich.align_threshold = v; })
      .def_property(
          "overlap_threshold", [](const PipelineConfig& c) { return c.enrich.overlap_threshold; },
          [](PipelineConfig& c, double v) { c.enrich.overlap_threshold = v; })
      .def("validate", &PipelineConfig::validate)
      .def("hash", &PipelineConfig::hash)
      .def("snapshot_path", &PipelineConfig::snapshot_path);

  m.def(
      "run_stage",
      [](const std::string& stage, const PipelineConfig& cfg) {
        auto st = parse_stage(stage);
        if (!st) throw Error(ErrorCode::kConfigError, "unknown stage " + stage);
        std::vector<StageSummary> out;
        {
          py::gil_scoped_release release;
          out = run_stage(*st, cfg);
        }
        py::list l;
        for (const auto& s : out) l.append(summary_dict(s));
        return l;
      },
      py::arg("stage"), py::arg("config"));

  py::class_<Index>(m, "Index")
      .def(py::init<const PipelineConfig&, std::optional<std::string>>(), py::arg("config"),
           py::arg("snapshot") = py::none())
      .def("search_text", &Index::search_text, py::arg("query"))
      .def("search_code", &Index::search_code, py::arg("code"))
      .def("node", &Index::node, py::arg("id"))
      .def("fragment", &Index::fragment, py::arg("anchors"), py::arg("radius") = py::none(),
           py::arg("budget") = py::none())
      .def("stats", &Index::stats)
      .def("request", &Index::request, py::arg("method"), py::arg("path"),
           py::arg("params") = std::map<std::string, std::string>{}, py::arg("body") = "")
      .def("__len__", &Index::node_count);

  m.def(
      "match_api_packet",
      [](std::optional<std::string> qn, std::optional<std::string> qc, std::optional<int> qk,
         std::optional<std::string> cn, std::optional<std::string> cc, std::optional<int> ck) {
        return match_api_packet({qn, qc, qk}, {cn, cc, ck});
      },
      py::arg("query_name"), py::arg("query_container"), py::arg("query_params"), py::arg("name"),
      py::arg("container"), py::arg("params"));
  m.def("overlap_score", &overlap_score, py::arg("a"), py::arg("b"));
}
