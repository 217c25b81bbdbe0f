// Python bindings for the compression core: compress/decompress, the
// analysis report (as a dict and as stable text), transform traces and a
// few raw building blocks used by the smoke tests.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <string>

#include "cdmpm/analysis.hpp"
#include "cdmpm/codec.hpp"
#include "cdmpm/core.hpp"
#include "cdmpm/errors.hpp"
#include "cdmpm/selftest.hpp"
#include "cdmpm/transform.hpp"

namespace py = pybind11;
using namespace cdmpm;

namespace {

ByteSpan as_span(const std::string& data) {
    return ByteSpan(reinterpret_cast<const std::uint8_t*>(data.data()), data.size());
}

py::bytes as_bytes(const Bytes& data) {
    return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

Mode parse_mode(const std::string& name) {
    if (name == "cdmpm") return Mode::Cdmpm;
    if (name == "mpm") return Mode::Mpm;
    throw py::value_error("mode must be 'cdmpm' or 'mpm'");
}

// levels == 0 picks the maximal usable depth for the input, capped at 24.
Params resolve_params(std::size_t input_size, unsigned branching, unsigned levels,
                      const std::string& mode) {
    Params params;
    params.branching = branching;
    params.mode = parse_mode(mode);
    if (levels == 0) {
        const int depth = effective_levels(input_size, branching, 63);
        params.levels = std::clamp<std::uint32_t>(static_cast<std::uint32_t>(depth), 1, 24);
    } else {
        params.levels = levels;
    }
    return params;
}

py::object check_value(Check check) {
    if (check == Check::Vacuous) return py::none();
    return py::bool_(check == Check::Pass);
}

py::dict report_dict(const RedundancyReport& report) {
    py::dict d;
    d["n"] = report.input_size;
    d["r"] = report.branching;
    d["i_eff"] = report.top_level;
    d["mode"] = mode_name(report.mode);
    d["k"] = report.refinement;
    d["alphabet_size"] = report.alphabet_size;
    d["payload_bits"] = report.payload_bits;
    d["bits_per_symbol"] = report.bits_per_symbol;
    d["h_g_bits"] = report.grammar_entropy_bits;
    d["h1_bits_per_symbol"] = report.order1_bits_per_symbol;
    d["lemma_rhs_bits"] = report.lemma_rhs_bits;
    d["lemma_rhs_tight_bits"] = report.lemma_rhs_tight_bits;
    d["lemma_pass"] = check_value(report.lemma_check);
    d["theorem_c"] = report.bound_constant ? py::object(py::float_(*report.bound_constant))
                                           : py::object(py::none());
    d["theorem_bound"] = report.bound_value ? py::object(py::float_(*report.bound_value))
                                            : py::object(py::none());
    d["redundancy"] = report.redundancy;
    d["theorem_pass"] = check_value(report.theorem_check);
    d["sum_l"] = report.coded_total;
    d["sum_l_bound"] = report.coded_total_bound
                           ? py::object(py::float_(*report.coded_total_bound))
                           : py::object(py::none());
    d["sum_l_pass"] = check_value(report.coded_total_check);

    py::list levels;
    for (const LevelStats& s : report.levels) {
        py::dict level;
        level["level"] = s.level;
        level["l"] = s.coded_count;
        level["f_s"] = s.new_count;
        level["tokens"] = s.token_count;
        level["classes"] = s.class_count;
        levels.append(level);
    }
    d["levels"] = levels;
    return d;
}

}  // namespace

PYBIND11_MODULE(_cdmpm, m) {
    m.doc() = "Context-dependent multilevel pattern-matching compressor";
    m.attr("__version__") = "0.1.0";

    py::register_exception<CorruptError>(m, "CorruptContainerError", PyExc_ValueError);
    py::register_exception<DesyncError>(m, "DesyncError", PyExc_ValueError);

    m.def(
        "compress",
        [](const std::string& data, unsigned r, unsigned levels, const std::string& mode) {
            const Params params = resolve_params(data.size(), r, levels, mode);
            return as_bytes(compress(as_span(data), params));
        },
        py::arg("data"), py::arg("r") = 2, py::arg("levels") = 0, py::arg("mode") = "cdmpm",
        "Compress bytes into a self-describing container. levels=0 selects the\n"
        "maximal depth for the input (capped at 24).");

    m.def(
        "decompress",
        [](const std::string& container) { return as_bytes(decompress(as_span(container))); },
        py::arg("container"), "Recover the original bytes from a container.");

    m.def(
        "analyze",
        [](const std::string& data, unsigned r, unsigned levels, const std::string& mode,
           unsigned k) {
            const Params params = resolve_params(data.size(), r, levels, mode);
            return report_dict(redundancy_report(as_span(data), params, k));
        },
        py::arg("data"), py::arg("r") = 2, py::arg("levels") = 0, py::arg("mode") = "cdmpm",
        py::arg("k") = 1, "Compress and evaluate the entropy/redundancy bounds; returns a dict.");

    m.def(
        "analyze_report",
        [](const std::string& data, unsigned r, unsigned levels, const std::string& mode,
           unsigned k) {
            const Params params = resolve_params(data.size(), r, levels, mode);
            return render_report(redundancy_report(as_span(data), params, k));
        },
        py::arg("data"), py::arg("r") = 2, py::arg("levels") = 0, py::arg("mode") = "cdmpm",
        py::arg("k") = 1, "The analysis report in its stable key:value text form.");

    m.def(
        "trace",
        [](const std::string& data, unsigned r, unsigned levels, const std::string& mode) {
            const Params params = resolve_params(data.size(), r, levels, mode);
            const Alphabet alphabet = Alphabet::infer(as_span(data));
            const auto rep = build_multilevel(as_span(data), params, alphabet);
            return render_trace(rep, flatten(rep));
        },
        py::arg("data"), py::arg("r") = 2, py::arg("levels") = 0, py::arg("mode") = "cdmpm",
        "Plain-text transform trace (one line per level plus the coded stream).");

    m.def(
        "grammar",
        [](const std::string& data, unsigned r, unsigned levels, const std::string& mode) {
            const Params params = resolve_params(data.size(), r, levels, mode);
            const Alphabet alphabet = Alphabet::infer(as_span(data));
            return grammar_dump(build_multilevel(as_span(data), params, alphabet)).to_string();
        },
        py::arg("data"), py::arg("r") = 2, py::arg("levels") = 0, py::arg("mode") = "cdmpm",
        "Production view of the transform output.");

    m.def(
        "rary_expansion",
        [](std::uint64_t n, unsigned r, unsigned levels) { return rary_expansion(n, r, levels); },
        py::arg("n"), py::arg("r"), py::arg("levels"),
        "Per-level symbol counts [n_top..n_0] from the base-r digits of n.");

    m.def(
        "order1_entropy",
        [](const std::string& data) {
            return order1_entropy(as_span(data), Alphabet::infer(as_span(data)));
        },
        py::arg("data"), "Order-1 conditional empirical entropy in bits per symbol.");

    m.def(
        "grammar_entropy",
        [](const std::string& data, unsigned r, unsigned levels, const std::string& mode) {
            const Params params = resolve_params(data.size(), r, levels, mode);
            const Alphabet alphabet = Alphabet::infer(as_span(data));
            return grammar_entropy(build_multilevel(as_span(data), params, alphabet)).total_bits;
        },
        py::arg("data"), py::arg("r") = 2, py::arg("levels") = 0, py::arg("mode") = "cdmpm",
        "Conditional empirical entropy of the transform output, in bits.");

    m.def(
        "theorem_constant",
        [](unsigned r, unsigned k, std::size_t alphabet_size) -> py::object {
            const auto value = theorem_constant(r, k, alphabet_size);
            return value ? py::object(py::float_(*value)) : py::object(py::none());
        },
        py::arg("r"), py::arg("k"), py::arg("alphabet_size"),
        "Redundancy bound constant; None when the alphabet has fewer than 2 symbols.");
}
