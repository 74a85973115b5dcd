#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nomacomp/config.hpp"
#include "nomacomp/errors.hpp"
#include "nomacomp/output.hpp"
#include "nomacomp/simulation.hpp"

namespace py = pybind11;
using namespace nomacomp;

namespace {

py::dict to_dict(const RunSummary& s) {
    py::dict d;
    d["scheme"] = std::string(to_string(s.scheme));
    d["seed"] = s.seed;
    d["rrh_count"] = s.rrh_count;
    d["ue_count"] = s.ue_count;
    d["ttis"] = s.ttis;
    d["mean_throughput_bps"] = s.mean_throughput_bps;
    d["mean_edge_throughput_bps"] = s.mean_edge_throughput_bps;
    d["mean_nonedge_throughput_bps"] = s.mean_nonedge_throughput_bps;
    d["mean_edge_no_comp_bps"] = s.mean_edge_no_comp_bps;
    d["mean_nonedge_no_comp_bps"] = s.mean_nonedge_no_comp_bps;
    d["ue_avg_throughput_bps"] = s.ue_avg_throughput_bps;
    d["ue_avg_no_comp_bps"] = s.ue_avg_no_comp_bps;
    d["ue_edge_fraction"] = s.ue_edge_fraction;
    d["cdf_edge_inst"] = s.cdf_edge_inst;
    d["cdf_nonedge_inst"] = s.cdf_nonedge_inst;
    d["cdf_edge_avg"] = s.cdf_edge_avg;
    d["cdf_nonedge_avg"] = s.cdf_nonedge_avg;
    d["decreased_inst_pct"] = s.decreased_inst_pct;
    d["decreased_inst_edge_pct"] = s.decreased_inst_edge_pct;
    d["decreased_inst_nonedge_pct"] = s.decreased_inst_nonedge_pct;
    d["nonedge_df_breaches"] = s.nonedge_df_breaches;
    d["reduced_more_than"] = std::vector<int>(s.reduced_more_than.begin(), s.reduced_more_than.end());
    d["ues_increased"] = s.ues_increased;
    d["ues_equal"] = s.ues_equal;
    d["ues_decreased"] = s.ues_decreased;
    d["activations"] = s.activations;
    d["avg_iterations"] = s.avg_iterations;
    d["avg_merge_tests"] = s.avg_merge_tests;
    d["avg_gated_per_rrh"] = s.avg_gated_per_rrh;
    d["avg_coalition_size"] = s.avg_coalition_size;
    d["avg_max_coalition_size"] = s.avg_max_coalition_size;
    d["zf_regularized"] = s.zf_regularized;
    d["shared_stream_digest"] = s.shared_stream_digest;
    return d;
}

py::dict to_dict(const TtiReport& r) {
    py::list ues;
    for (const UeTtiRecord& u : r.ues) {
        py::dict x;
        x["ue"] = u.ue;
        x["serving_rrh"] = u.serving_rrh;
        x["is_edge"] = u.is_edge;
        x["effective_sinr"] = u.effective_sinr;
        x["throughput_bps"] = u.throughput_bps;
        x["no_comp_throughput_bps"] = u.no_comp_throughput_bps;
        x["scheduled_rbs"] = u.scheduled_rbs;
        ues.append(x);
    }
    py::list coalitions;
    for (const Mask m : r.partition.coalitions()) {
        py::list members;
        for (int b = 0; b < 64; ++b) {
            if (m & bit(b)) members.append(b);
        }
        coalitions.append(members);
    }
    py::dict d;
    d["tti"] = r.tti;
    d["ues"] = ues;
    d["partition"] = coalitions;
    d["activated"] = r.activated;
    d["handovers"] = r.handovers;
    d["edge_flips"] = r.edge_flips;
    d["dissolved"] = r.dissolved;
    d["iterations"] = r.iterations;
    d["rounds"] = r.rounds;
    d["merge_tests"] = r.merge_tests;
    d["split_tests"] = r.split_tests;
    d["merges_accepted"] = r.merges_accepted;
    d["splits_accepted"] = r.splits_accepted;
    d["size_rejections"] = r.size_rejections;
    d["gated_entries"] = r.gated_entries;
    d["zf_regularized"] = r.zf_regularized;
    d["stable_admissible"] = r.stable_admissible ? py::cast(*r.stable_admissible) : py::none();
    d["stable_unrestricted"] = r.stable_unrestricted ? py::cast(*r.stable_unrestricted) : py::none();
    return d;
}

ScenarioConfig parse(const std::string& config_json) { return config_from_json(config_json); }

}  // namespace

PYBIND11_MODULE(_nomacomp, m) {
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("version", [] { return std::string(version()); });
    m.def("default_config_json", [] { return config_to_json(ScenarioConfig{}); });
    m.def("desk_config_json", [] { return config_to_json(desk_scale_config()); });
    m.def("normalize_config_json", [](const std::string& text) { return config_to_json(parse(text)); });
    m.def("config_hash", [](const std::string& text) { return config_hash(parse(text)); });

    m.def(
        "run",
        [](const std::string& config_json, bool keep_reports) {
            const ScenarioConfig c = parse(config_json);
            SimulationOptions o;
            o.keep_reports = keep_reports;
            RunResult res;
            {
                py::gil_scoped_release release;
                res = run_simulation(c, o);
            }
            py::dict out = to_dict(res.summary);
            if (keep_reports) {
                py::list reports;
                for (const TtiReport& r : res.reports) reports.append(to_dict(r));
                out["reports"] = reports;
            }
            return out;
        },
        py::arg("config_json"), py::arg("keep_reports") = false);

    m.def(
        "compare",
        [](const std::string& config_json, const std::vector<std::string>& schemes) {
            const ScenarioConfig c = parse(config_json);
            std::vector<Scheme> parsed;
            for (const std::string& s : schemes) parsed.push_back(parse_scheme(s));
            std::vector<RunResult> results;
            {
                py::gil_scoped_release release;
                results = paired_comparison(c, parsed);
            }
            py::list out;
            for (const RunResult& r : results) out.append(to_dict(r.summary));
            return out;
        },
        py::arg("config_json"), py::arg("schemes"));

    m.def(
        "sweep",
        [](const std::string& config_json, const std::string& axis, const std::vector<double>& values, int runs) {
            const ScenarioConfig c = parse(config_json);
            std::vector<SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = sweep(c, axis, values, runs);
            }
            py::list out;
            for (const SweepRow& r : rows) {
                py::dict d;
                d["axis"] = r.axis;
                d["value"] = r.value;
                d["scheme"] = std::string(to_string(r.scheme));
                d["runs"] = r.runs;
                d["mean_throughput_bps"] = r.mean_throughput_bps;
                d["mean_edge_throughput_bps"] = r.mean_edge_throughput_bps;
                d["mean_nonedge_throughput_bps"] = r.mean_nonedge_throughput_bps;
                d["avg_coalition_size"] = r.avg_coalition_size;
                d["avg_max_coalition_size"] = r.avg_max_coalition_size;
                d["avg_iterations"] = r.avg_iterations;
                d["decreased_inst_pct"] = r.decreased_inst_pct;
                out.append(d);
            }
            return out;
        },
        py::arg("config_json"), py::arg("axis"), py::arg("values"), py::arg("runs") = 1);

    py::class_<Simulation>(m, "Simulation")
        .def(py::init([](const std::string& config_json, bool check_stability) {
                 SimulationOptions o;
                 o.check_stability = check_stability;
                 return Simulation(parse(config_json), o);
             }),
             py::arg("config_json"), py::arg("check_stability") = false)
        .def_property_readonly("done", &Simulation::done)
        .def_property_readonly("current_tti", &Simulation::current_tti)
        .def_property_readonly("shared_stream_digest", &Simulation::shared_stream_digest)
        .def_property_readonly("partition", [](const Simulation& s) { return s.partition().to_string(); })
        .def("step", [](Simulation& s) { return to_dict(s.step()); })
        .def("summary", [](const Simulation& s) { return to_dict(s.summary()); });
}
