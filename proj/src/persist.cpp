#include "sigid/persist.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sigid {

using nlohmann::json;

namespace {

void atomic_write_text(const std::filesystem::path& path, const std::string& text) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(Errc::io_failure, "cannot open " + tmp + " for writing");
        out << text;
        if (!out) raise(Errc::io_failure, "short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) raise(Errc::io_failure, "rename " + tmp + ": " + ec.message());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_failure, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

json parse_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        raise(Errc::parse_error, origin + ": " + e.what());
    }
}

json load_checked(const std::filesystem::path& path, const char* schema) {
    const json j = parse_text(read_text(path), path.string());
    if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
        raise(Errc::parse_error, path.string() + ": missing schema tag");
    const auto name = j["schema"].get<std::string>();
    if (name != schema)
        raise(Errc::parse_error,
              path.string() + ": schema '" + name + "', expected '" + schema + "'");
    const int version = j.value("version", -1);
    if (version != kSchemaVersion)
        raise(Errc::schema_version_mismatch,
              path.string() + ": file is " + name + " v" + std::to_string(version) +
                  ", this build reads v" + std::to_string(kSchemaVersion));
    return j;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

const char* cov_model_name(CovModel m) {
    return m == CovModel::shrunk_full ? "shrunk_full" : "diagonal";
}

CovModel cov_model_from(const std::string& name, const std::string& origin) {
    if (name == "diagonal") return CovModel::diagonal;
    if (name == "shrunk_full") return CovModel::shrunk_full;
    raise(Errc::parse_error, origin + ": unknown cov_model '" + name + "'");
}

json matcher_to_json(const MatcherConfig& cfg) {
    return {{"empirical_k", cfg.empirical_k},
            {"cov_model", cov_model_name(cfg.cov_model)},
            {"shrink_factor", cfg.shrink_factor},
            {"weights", cfg.weights}};
}

MatcherConfig matcher_from_json(const json& j, const std::string& origin) {
    MatcherConfig cfg;
    cfg.empirical_k = j.value("empirical_k", cfg.empirical_k);
    if (j.contains("cov_model"))
        cfg.cov_model = cov_model_from(j["cov_model"].get<std::string>(), origin);
    cfg.shrink_factor = j.value("shrink_factor", cfg.shrink_factor);
    if (j.contains("weights")) cfg.weights = j["weights"].get<std::vector<double>>();
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    return {
        {"preprocess",
         {{"target_height", cfg.preprocess.target_height},
          {"median_window", cfg.preprocess.median_window},
          {"mean_window", cfg.preprocess.mean_window},
          {"hpr_factor", cfg.preprocess.hpr_factor},
          {"min_ink_pixels", cfg.preprocess.min_ink_pixels}}},
        {"features",
         {{"proj_smooth_window", cfg.features.proj_smooth_window},
          {"edge_window", cfg.features.edge_window},
          {"extent_min_count", cfg.features.extent_min_count}}},
        {"matcher", matcher_to_json(cfg.matcher)},
        {"svm",
         {{"C", cfg.svm.C},
          {"tol", cfg.svm.tol},
          {"max_passes", cfg.svm.max_passes},
          {"seed", cfg.svm.seed}}},
        {"training", {{"neg_ratio", cfg.training.neg_ratio}}},
        {"synth",
         {{"subjects", cfg.synth.subjects},
          {"genuine_per_subject", cfg.synth.genuine_per_subject},
          {"forgeries_per_subject", cfg.synth.forgeries_per_subject},
          {"enroll_per_subject", cfg.synth.enroll_per_subject},
          {"seed", cfg.synth.seed},
          {"canvas_width", cfg.synth.canvas_width},
          {"canvas_height", cfg.synth.canvas_height}}},
    };
}

RunConfig config_from_json(const json& j, const std::string& origin) {
    RunConfig cfg;
    if (j.contains("preprocess")) {
        const auto& p = j["preprocess"];
        cfg.preprocess.target_height = p.value("target_height", cfg.preprocess.target_height);
        cfg.preprocess.median_window = p.value("median_window", cfg.preprocess.median_window);
        cfg.preprocess.mean_window = p.value("mean_window", cfg.preprocess.mean_window);
        cfg.preprocess.hpr_factor = p.value("hpr_factor", cfg.preprocess.hpr_factor);
        cfg.preprocess.min_ink_pixels = p.value("min_ink_pixels", cfg.preprocess.min_ink_pixels);
    }
    if (j.contains("features")) {
        const auto& f = j["features"];
        cfg.features.proj_smooth_window =
            f.value("proj_smooth_window", cfg.features.proj_smooth_window);
        cfg.features.edge_window = f.value("edge_window", cfg.features.edge_window);
        cfg.features.extent_min_count = f.value("extent_min_count", cfg.features.extent_min_count);
    }
    if (j.contains("matcher")) cfg.matcher = matcher_from_json(j["matcher"], origin);
    if (j.contains("svm")) {
        const auto& s = j["svm"];
        cfg.svm.C = s.value("C", cfg.svm.C);
        cfg.svm.tol = s.value("tol", cfg.svm.tol);
        cfg.svm.max_passes = s.value("max_passes", cfg.svm.max_passes);
        cfg.svm.seed = s.value("seed", cfg.svm.seed);
    }
    if (j.contains("training"))
        cfg.training.neg_ratio = j["training"].value("neg_ratio", cfg.training.neg_ratio);
    if (j.contains("synth")) {
        const auto& s = j["synth"];
        cfg.synth.subjects = s.value("subjects", cfg.synth.subjects);
        cfg.synth.genuine_per_subject =
            s.value("genuine_per_subject", cfg.synth.genuine_per_subject);
        cfg.synth.forgeries_per_subject =
            s.value("forgeries_per_subject", cfg.synth.forgeries_per_subject);
        cfg.synth.enroll_per_subject = s.value("enroll_per_subject", cfg.synth.enroll_per_subject);
        cfg.synth.seed = s.value("seed", cfg.synth.seed);
        cfg.synth.canvas_width = s.value("canvas_width", cfg.synth.canvas_width);
        cfg.synth.canvas_height = s.value("canvas_height", cfg.synth.canvas_height);
    }
    return cfg;
}

json cmc_to_json(const CmcCurve& c) { return json(c.probabilities); }

CmcCurve cmc_from_json(const json& j) {
    CmcCurve c;
    c.probabilities = j.get<std::vector<double>>();
    return c;
}

}  // namespace

std::string serialize_gallery(const Gallery& g) {
    json subjects = json::array();
    for (const auto& [id, stats] : g.entries) {
        json s = {{"id", id},
                  {"n_templates", stats.n_templates},
                  {"mean", stats.mean},
                  {"std", stats.std},
                  {"weights", stats.weights},
                  {"cov_model", cov_model_name(stats.cov_model)},
                  {"lambda", stats.lambda}};
        if (stats.cov_model == CovModel::shrunk_full) s["chol"] = stats.chol;
        subjects.push_back(std::move(s));
    }
    const json j = {{"schema", "sigid.gallery"},
                    {"version", kSchemaVersion},
                    {"feature_schema", g.schema_id},
                    {"matcher", matcher_to_json(g.cfg)},
                    {"subjects", subjects}};
    return j.dump(2) + "\n";
}

void save_gallery(const Gallery& g, const std::filesystem::path& path) {
    atomic_write_text(path, serialize_gallery(g));
}

Gallery load_gallery(const std::filesystem::path& path) {
    const json j = load_checked(path, "sigid.gallery");
    Gallery g;
    g.schema_id = j.value("feature_schema", std::string(kFeatureSchemaId));
    g.cfg = matcher_from_json(j.at("matcher"), path.string());
    for (const auto& s : j.at("subjects")) {
        SubjectStats stats;
        stats.subject = s.at("id").get<std::string>();
        stats.n_templates = s.at("n_templates").get<int>();
        stats.mean = s.at("mean").get<std::vector<double>>();
        stats.std = s.at("std").get<std::vector<double>>();
        stats.weights = s.at("weights").get<std::vector<double>>();
        stats.cov_model = cov_model_from(s.at("cov_model").get<std::string>(), path.string());
        stats.lambda = s.at("lambda").get<double>();
        if (s.contains("chol")) stats.chol = s["chol"].get<std::vector<double>>();
        g.entries.emplace(stats.subject, std::move(stats));
    }
    if (g.entries.empty()) raise(Errc::parse_error, path.string() + ": gallery has no subjects");
    return g;
}

std::string serialize_model(const SvmModel& m) {
    json svs = json::array();
    for (const auto& v : m.support_vectors) svs.push_back({v[0], v[1], v[2]});
    const json j = {{"schema", "sigid.svm-model"},
                    {"version", kSchemaVersion},
                    {"kernel", "linear"},
                    {"C", m.C},
                    {"tol", m.tol},
                    {"bias", m.bias},
                    {"converged", m.converged},
                    {"iterations", m.iterations},
                    {"support_vectors", svs},
                    {"labels", m.labels},
                    {"alphas", m.alphas},
                    {"training",
                     {{"seed", m.seed},
                      {"n_positive", m.n_positive},
                      {"n_negative", m.n_negative},
                      {"sv_indices", m.sv_indices}}}};
    return j.dump(2) + "\n";
}

void save_model(const SvmModel& m, const std::filesystem::path& path) {
    atomic_write_text(path, serialize_model(m));
}

SvmModel load_model(const std::filesystem::path& path) {
    const json j = load_checked(path, "sigid.svm-model");
    if (j.value("kernel", "") != std::string("linear"))
        raise(Errc::parse_error, path.string() + ": unsupported kernel");
    SvmModel m;
    m.C = j.at("C").get<double>();
    m.tol = j.at("tol").get<double>();
    m.bias = j.at("bias").get<double>();
    m.converged = j.at("converged").get<bool>();
    m.iterations = j.at("iterations").get<int>();
    for (const auto& v : j.at("support_vectors"))
        m.support_vectors.push_back({v.at(0).get<double>(), v.at(1).get<double>(),
                                     v.at(2).get<double>()});
    m.labels = j.at("labels").get<std::vector<int>>();
    m.alphas = j.at("alphas").get<std::vector<double>>();
    const auto& t = j.at("training");
    m.seed = t.at("seed").get<std::uint64_t>();
    m.n_positive = t.at("n_positive").get<int>();
    m.n_negative = t.at("n_negative").get<int>();
    m.sv_indices = t.at("sv_indices").get<std::vector<int>>();
    if (m.labels.size() != m.support_vectors.size() || m.alphas.size() != m.labels.size())
        raise(Errc::parse_error, path.string() + ": inconsistent support vector arrays");
    return m;
}

std::string serialize_report(const Report& r, const RunConfig& cfg) {
    json j = {{"schema", "sigid.report"},
              {"version", kSchemaVersion},
              {"config", config_to_json(cfg)},
              {"n_subjects", r.n_subjects},
              {"genuine",
               {{"n_queries", r.n_genuine},
                {"rank1",
                 {{"fused", r.rank1_fused},
                  {"ed", r.rank1_ed},
                  {"md", r.rank1_md},
                  {"ge", r.rank1_ge}}},
                {"cmc",
                 {{"fused", cmc_to_json(r.cmc_fused)},
                  {"ed", cmc_to_json(r.cmc_ed)},
                  {"md", cmc_to_json(r.cmc_md)},
                  {"ge", cmc_to_json(r.cmc_ge)}}}}},
              {"forgery",
               {{"present", r.forgery_present},
                {"n_queries", r.n_forgery},
                {"targeted_rank1_rate", r.forgery_rank1_hit_rate}}}};
    return j.dump(2) + "\n";
}

void save_report(const Report& r, const RunConfig& cfg, const std::filesystem::path& path) {
    atomic_write_text(path, serialize_report(r, cfg));
}

Report load_report(const std::filesystem::path& path) {
    const json j = load_checked(path, "sigid.report");
    Report r;
    r.n_subjects = j.at("n_subjects").get<int>();
    const auto& g = j.at("genuine");
    r.n_genuine = g.at("n_queries").get<int>();
    r.rank1_fused = g.at("rank1").at("fused").get<double>();
    r.rank1_ed = g.at("rank1").at("ed").get<double>();
    r.rank1_md = g.at("rank1").at("md").get<double>();
    r.rank1_ge = g.at("rank1").at("ge").get<double>();
    r.cmc_fused = cmc_from_json(g.at("cmc").at("fused"));
    r.cmc_ed = cmc_from_json(g.at("cmc").at("ed"));
    r.cmc_md = cmc_from_json(g.at("cmc").at("md"));
    r.cmc_ge = cmc_from_json(g.at("cmc").at("ge"));
    const auto& f = j.at("forgery");
    r.forgery_present = f.at("present").get<bool>();
    r.n_forgery = f.at("n_queries").get<int>();
    r.forgery_rank1_hit_rate = f.at("targeted_rank1_rate").get<double>();
    return r;
}

std::string serialize_manifest(const DatasetManifest& m) {
    json subjects = json::array();
    for (const auto& s : m.subjects)
        subjects.push_back({{"id", s.id},
                            {"genuine", s.genuine},
                            {"forgery", s.forgery},
                            {"enroll", s.enroll},
                            {"test", s.test}});
    const json j = {{"schema", "sigid.manifest"},
                    {"version", kSchemaVersion},
                    {"seed", m.seed},
                    {"params",
                     {{"subjects", m.params.subjects},
                      {"genuine_per_subject", m.params.genuine_per_subject},
                      {"forgeries_per_subject", m.params.forgeries_per_subject},
                      {"enroll_per_subject", m.params.enroll_per_subject},
                      {"seed", m.params.seed},
                      {"canvas_width", m.params.canvas_width},
                      {"canvas_height", m.params.canvas_height}}},
                    {"subjects", subjects}};
    return j.dump(2) + "\n";
}

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
    atomic_write_text(path, serialize_manifest(m));
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    const json j = load_checked(path, "sigid.manifest");
    DatasetManifest m;
    m.root = path.parent_path();
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto& p = j.at("params");
    m.params.subjects = p.at("subjects").get<int>();
    m.params.genuine_per_subject = p.at("genuine_per_subject").get<int>();
    m.params.forgeries_per_subject = p.at("forgeries_per_subject").get<int>();
    m.params.enroll_per_subject = p.at("enroll_per_subject").get<int>();
    m.params.seed = p.at("seed").get<std::uint64_t>();
    m.params.canvas_width = p.at("canvas_width").get<int>();
    m.params.canvas_height = p.at("canvas_height").get<int>();
    for (const auto& s : j.at("subjects")) {
        SubjectFiles f;
        f.id = s.at("id").get<std::string>();
        f.genuine = s.at("genuine").get<std::vector<std::string>>();
        f.forgery = s.at("forgery").get<std::vector<std::string>>();
        f.enroll = s.at("enroll").get<std::vector<std::string>>();
        f.test = s.at("test").get<std::vector<std::string>>();
        m.subjects.push_back(std::move(f));
    }
    validate_manifest(m);
    return m;
}

std::string serialize_config(const RunConfig& cfg) {
    json j = config_to_json(cfg);
    j["schema"] = "sigid.run-config";
    j["version"] = kSchemaVersion;
    return j.dump(2) + "\n";
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
    atomic_write_text(path, serialize_config(cfg));
}

RunConfig load_config(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    return config_from_json_text(text, path.string());
}

RunConfig config_from_json_text(const std::string& text, const std::string& origin) {
    const json j = parse_text(text, origin);
    if (!j.is_object()) raise(Errc::parse_error, origin + ": config must be a JSON object");
    if (j.contains("schema")) {
        if (j["schema"].get<std::string>() != "sigid.run-config")
            raise(Errc::parse_error, origin + ": not a run-config file");
        const int version = j.value("version", -1);
        if (version != kSchemaVersion)
            raise(Errc::schema_version_mismatch,
                  origin + ": file is sigid.run-config v" + std::to_string(version) +
                      ", this build reads v" + std::to_string(kSchemaVersion));
    }
    return config_from_json(j, origin);
}

void write_features_csv(const std::vector<std::pair<std::string, FeatureVector>>& rows,
                        const std::filesystem::path& path) {
    std::string out = "subject";
    for (const auto& name : feature_names()) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (const auto& [subject, fv] : rows) {
        out += subject;
        for (const double v : fv.values) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    atomic_write_text(path, out);
}

nlohmann::json feature_vector_to_json(const FeatureVector& fv) {
    json j = json::object();
    const auto& names = feature_names();
    for (int i = 0; i < kFeatureCount; ++i) j[std::string(names[i])] = fv.values[i];
    return j;
}

void write_cmc_csv(const Report& r, const std::filesystem::path& path) {
    std::string out = "rank,p_fused,p_ed,p_md,p_ge\n";
    for (int rank = 1; rank <= r.n_subjects; ++rank) {
        out += std::to_string(rank);
        for (const CmcCurve* c : {&r.cmc_fused, &r.cmc_ed, &r.cmc_md, &r.cmc_ge}) {
            out += ',';
            out += format_double(c->probabilities.at(rank - 1));
        }
        out += '\n';
    }
    atomic_write_text(path, out);
}

void write_cmc_svg(const Report& r, const std::filesystem::path& path) {
    const int width = 720, height = 480;
    const double x0 = 70, y0 = 40, plot_w = width - 110, plot_h = height - 110;
    const int n = r.n_subjects;

    const auto px = [&](double rank) {
        return n > 1 ? x0 + plot_w * (rank - 1.0) / (n - 1.0) : x0 + plot_w / 2.0;
    };
    const auto py = [&](double p) { return y0 + plot_h * (1.0 - p); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + format_double(x0) +
           "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">Cumulative match "
           "characteristic</text>\n";

    for (int grid = 0; grid <= 10; ++grid) {
        const double p = grid / 10.0;
        svg += "<line x1=\"" + format_double(x0) + "\" y1=\"" + format_double(py(p)) +
               "\" x2=\"" + format_double(x0 + plot_w) + "\" y2=\"" + format_double(py(p)) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + format_double(x0 - 40) + "\" y=\"" + format_double(py(p) + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + format_double(p) +
               "</text>\n";
    }
    svg += "<text x=\"" + format_double(x0 + plot_w / 2 - 14) + "\" y=\"" +
           format_double(y0 + plot_h + 36) +
           "\" font-family=\"sans-serif\" font-size=\"12\">rank</text>\n";

    const struct {
        const CmcCurve* curve;
        const char* color;
        const char* label;
    } series[] = {{&r.cmc_fused, "#c0392b", "fused"},
                  {&r.cmc_ed, "#2980b9", "euclidean"},
                  {&r.cmc_md, "#27ae60", "mahalanobis"},
                  {&r.cmc_ge, "#8e44ad", "empirical"}};

    int legend_y = 60;
    for (const auto& s : series) {
        std::string points;
        for (int rank = 1; rank <= n; ++rank) {
            points += format_double(px(rank)) + "," +
                      format_double(py(s.curve->probabilities.at(rank - 1))) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += s.color;
        svg += "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
        svg += "<rect x=\"" + format_double(x0 + plot_w - 120) + "\" y=\"" +
               std::to_string(legend_y - 9) + "\" width=\"12\" height=\"3\" fill=\"";
        svg += s.color;
        svg += "\"/>\n<text x=\"" + format_double(x0 + plot_w - 102) + "\" y=\"" +
               std::to_string(legend_y - 4) + "\" font-family=\"sans-serif\" font-size=\"11\">";
        svg += s.label;
        svg += "</text>\n";
        legend_y += 16;
    }
    svg += "<line x1=\"" + format_double(x0) + "\" y1=\"" + format_double(y0) + "\" x2=\"" +
           format_double(x0) + "\" y2=\"" + format_double(y0 + plot_h) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + format_double(x0) + "\" y1=\"" + format_double(y0 + plot_h) +
           "\" x2=\"" + format_double(x0 + plot_w) + "\" y2=\"" + format_double(y0 + plot_h) +
           "\" stroke=\"black\"/>\n";
    svg += "</svg>\n";
    atomic_write_text(path, svg);
}

}  // namespace sigid
