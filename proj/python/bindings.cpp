#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cdk/chess.hpp"
#include "cdk/config.hpp"
#include "cdk/errors.hpp"
#include "cdk/prompt.hpp"
#include "cdk/puzzle.hpp"
#include "cdk/reward.hpp"
#include "cdk/sampler.hpp"
#include "cdk/validate.hpp"

namespace py = pybind11;
using namespace cdk;

namespace {

chess::Position pos(const std::string& fen) { return chess::parse_fen(fen); }

std::vector<std::string> py_legal_moves(const std::string& fen) {
    std::vector<std::string> out;
    for (const auto& m : chess::legal_moves(pos(fen))) out.push_back(m.uci());
    return out;
}

std::string py_apply_move(const std::string& fen, const std::string& uci) {
    return chess::format_fen(chess::apply_move(pos(fen), chess::Move::parse(uci)));
}

// (id, themes, rating) triples keep the binding free of the full Puzzle type;
// samplers only consult ids, themes, and ratings.
struct LitePuzzle {
    std::string id;
    std::vector<std::string> themes;
    int rating = 0;
};

std::vector<data::Puzzle> inflate(const std::vector<LitePuzzle>& lite) {
    static const data::Puzzle shell = [] {
        data::Puzzle p;
        p.pre_position = chess::parse_fen("1k6/8/8/8/8/8/8/1R4K1 b - - 0 1");
        p.setup_move = chess::Move::parse("b8a8");
        p.position = chess::apply_move(p.pre_position, p.setup_move);
        p.solution = chess::Move::parse("b1b8");
        return p;
    }();
    std::vector<data::Puzzle> out;
    out.reserve(lite.size());
    for (const auto& l : lite) {
        data::Puzzle p = shell;
        p.id = l.id;
        p.rating = l.rating;
        p.themes = l.themes;
        std::sort(p.themes.begin(), p.themes.end());
        p.themes.erase(std::unique(p.themes.begin(), p.themes.end()), p.themes.end());
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<std::string> ids_of(const std::vector<data::Puzzle>& puzzles) {
    std::vector<std::string> out;
    out.reserve(puzzles.size());
    for (const auto& p : puzzles) out.push_back(p.id);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "chess puzzle distillation toolkit core";
    m.attr("__version__") = cfg::kToolkitVersion;

    py::register_exception<Error>(m, "ToolkitError");

    m.def("parse_fen", [](const std::string& fen) { return chess::format_fen(pos(fen)); },
          "Validate a FEN and return its canonical form", py::arg("fen"));
    m.def("legal_moves", &py_legal_moves, "Legal moves in UCI text, sorted", py::arg("fen"));
    m.def("apply_move", &py_apply_move, py::arg("fen"), py::arg("uci"));
    m.def("perft", [](const std::string& fen, int depth) { return chess::perft(pos(fen), depth); },
          py::arg("fen"), py::arg("depth"));
    m.def("piece_arrangement",
          [](const std::string& fen) { return chess::render_piece_arrangement(pos(fen)); },
          py::arg("fen"));
    m.def("render_legal_moves",
          [](const std::string& fen) { return chess::render_legal_moves(pos(fen)); },
          py::arg("fen"));

    m.def("solver_prompt",
          [](const std::string& fen) { return prompt::build_solver_prompt(pos(fen)); },
          "Hint-free solver prompt for a position", py::arg("fen"));

    m.def("extract_final_answer",
          [](const std::string& text) { return trace::extract_final_answer(text).uci(); },
          py::arg("text"));
    m.def("count_sentences", [](const std::string& text) { return trace::count_sentences(text); },
          py::arg("text"));

    m.def(
        "score",
        [](const std::string& completion, const std::string& expected, double eta) {
            reward::RewardConfig cfg;
            cfg.eta = eta;
            auto outcome = reward::score(completion, std::string_view(expected), cfg);
            return py::make_tuple(outcome.reward, reward::reason_name(outcome.reason));
        },
        "Verifiable reward: (reward, reason)", py::arg("completion"), py::arg("expected"),
        py::arg("eta") = 0.0);

    py::class_<LitePuzzle>(m, "LitePuzzle")
        .def(py::init([](std::string id, std::vector<std::string> themes, int rating) {
                 return LitePuzzle{std::move(id), std::move(themes), rating};
             }),
             py::arg("id"), py::arg("themes"), py::arg("rating") = 1500)
        .def_readwrite("id", &LitePuzzle::id)
        .def_readwrite("themes", &LitePuzzle::themes)
        .def_readwrite("rating", &LitePuzzle::rating);

    m.def(
        "sample_balanced",
        [](const std::vector<LitePuzzle>& puzzles, int K, int M, std::uint64_t seed,
           const std::vector<std::string>& exclude_ids) {
            sample::SamplerConfig cfg;
            cfg.strategy = sample::Strategy::balanced;
            cfg.rare_theme_count = K;
            cfg.per_theme_cap = M;
            cfg.seed = seed;
            cfg.exclude_ids = {exclude_ids.begin(), exclude_ids.end()};
            return ids_of(sample::sample_balanced(inflate(puzzles), cfg));
        },
        "Theme-balanced sample; returns selected ids in draw order", py::arg("puzzles"),
        py::arg("K") = 50, py::arg("M") = 800, py::arg("seed") = 0,
        py::arg("exclude_ids") = std::vector<std::string>{});
}
