#include "freewill/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "freewill/errors.hpp"
#include "freewill/metrics.hpp"
#include "freewill/version.hpp"

namespace freewill {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string fmt2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    return out;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Round tick spacing to a 1/2/5 decade multiple.
double nice_step(double span, int target_ticks) {
    if (span <= 0.0) return 1.0;
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double nice = 10.0;
    if (frac <= 1.0) nice = 1.0;
    else if (frac <= 2.0) nice = 2.0;
    else if (frac <= 5.0) nice = 5.0;
    return nice * mag;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b"};
constexpr const char* kMarkerColor = "#d62728";

}  // namespace

void write_trace_csv(const RunTrace& trace, const PhaseSchedule& schedule,
                     const fs::path& path) {
    const RunMetrics m = compute_run_metrics(trace.freewill, trace.baseline, schedule,
                                             1 /* window unused for per-row columns */);
    std::ofstream out = open_out(path);
    out << "t,agent,action,reward,T,eps,entropy_bits,entropy_nats,novelty,psi_chosen\n";
    for (std::size_t i = 0; i < trace.freewill.size(); ++i) {
        const StepRecord& f = trace.freewill[i];
        out << f.t << ",freewill," << f.action << ',' << f.reward << ',' << fmt9(f.temperature)
            << ',' << fmt9(f.eps) << ',' << fmt9(m.entropy_bits_fw[i]) << ','
            << fmt9(m.entropy_nats_fw[i]) << ',' << fmt9(m.novelty_fw[i]) << ','
            << fmt9(f.psi_chosen) << '\n';
        const StepRecord& b = trace.baseline[i];
        out << b.t << ",baseline," << b.action << ',' << b.reward << ',' << fmt9(b.temperature)
            << ',' << fmt9(b.eps) << ',' << fmt9(m.entropy_bits_base[i]) << ','
            << fmt9(m.entropy_nats_base[i]) << ',' << fmt9(m.novelty_base[i]) << ','
            << fmt9(b.psi_chosen) << '\n';
    }
    if (!out) throw IoError(path.string(), "write failed");
}

void write_aggregate_csv(const AggregateResult& result, long total_steps,
                         const fs::path& path) {
    std::ofstream out = open_out(path);
    out << "t,"
           "rolling_reward_freewill_mean,rolling_reward_freewill_std,"
           "rolling_reward_baseline_mean,rolling_reward_baseline_std,"
           "entropy_bits_freewill_mean,entropy_bits_freewill_std,"
           "entropy_bits_baseline_mean,entropy_bits_baseline_std,"
           "entropy_nats_freewill_mean,entropy_nats_freewill_std,"
           "entropy_nats_baseline_mean,entropy_nats_baseline_std,"
           "kl_mean,kl_std,"
           "novelty_freewill_mean,novelty_freewill_std,"
           "novelty_baseline_mean,novelty_baseline_std,"
           "regret_freewill_mean,regret_freewill_std,"
           "regret_baseline_mean,regret_baseline_std\n";
    const std::size_t rolling_len = result.freewill.rolling_reward.mean.size();
    for (long t = 0; t < total_steps; ++t) {
        const std::size_t i = static_cast<std::size_t>(t);
        out << t << ',';
        if (i < rolling_len) {
            out << fmt9(result.freewill.rolling_reward.mean[i]) << ','
                << fmt9(result.freewill.rolling_reward.stddev[i]) << ','
                << fmt9(result.baseline.rolling_reward.mean[i]) << ','
                << fmt9(result.baseline.rolling_reward.stddev[i]) << ',';
        } else {
            out << ",,,,";
        }
        out << fmt9(result.freewill.entropy_bits.mean[i]) << ','
            << fmt9(result.freewill.entropy_bits.stddev[i]) << ','
            << fmt9(result.baseline.entropy_bits.mean[i]) << ','
            << fmt9(result.baseline.entropy_bits.stddev[i]) << ','
            << fmt9(result.freewill.entropy_nats.mean[i]) << ','
            << fmt9(result.freewill.entropy_nats.stddev[i]) << ','
            << fmt9(result.baseline.entropy_nats.mean[i]) << ','
            << fmt9(result.baseline.entropy_nats.stddev[i]) << ','
            << fmt9(result.kl.mean[i]) << ',' << fmt9(result.kl.stddev[i]) << ','
            << fmt9(result.freewill.novelty.mean[i]) << ','
            << fmt9(result.freewill.novelty.stddev[i]) << ','
            << fmt9(result.baseline.novelty.mean[i]) << ','
            << fmt9(result.baseline.novelty.stddev[i]) << ','
            << fmt9(result.freewill.regret.mean[i]) << ','
            << fmt9(result.freewill.regret.stddev[i]) << ','
            << fmt9(result.baseline.regret.mean[i]) << ','
            << fmt9(result.baseline.regret.stddev[i]) << '\n';
    }
    if (!out) throw IoError(path.string(), "write failed");
}

void emit_svg(const std::vector<SvgSeries>& series, const std::vector<SvgMarker>& markers,
              const fs::path& path, const SvgOptions& options) {
    if (series.empty()) throw InvalidInput("emit_svg: no series");
    const std::size_t len = series.front().mean.size();
    if (len == 0) throw InvalidInput("emit_svg: empty series");
    for (const SvgSeries& s : series)
        if (s.mean.size() != len || s.stddev.size() != len)
            throw InvalidInput("emit_svg: series lengths differ");

    double ymin = series[0].mean[0], ymax = ymin;
    for (const SvgSeries& s : series)
        for (std::size_t i = 0; i < len; ++i) {
            ymin = std::min(ymin, s.mean[i] - s.stddev[i]);
            ymax = std::max(ymax, s.mean[i] + s.stddev[i]);
        }
    double pad = (ymax - ymin) * 0.05;
    if (pad <= 0.0) pad = std::max(1.0, std::abs(ymax)) * 0.05;
    ymin -= pad;
    ymax += pad;

    const double xmax = static_cast<double>(len - 1);
    const double left = 62, right = 14, top = options.title.empty() ? 16 : 34, bottom = 44;
    const double pw = options.width - left - right;
    const double ph = options.height - top - bottom;
    const double xspan = xmax > 0.0 ? xmax : 1.0;
    auto px = [&](double x) { return left + x / xspan * pw; };
    auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
        << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << ' '
        << options.height << "\">\n"
        << "<rect width=\"" << options.width << "\" height=\"" << options.height
        << "\" fill=\"#ffffff\"/>\n";
    if (!options.title.empty())
        svg << "<text x=\"" << options.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"14\">"
            << xml_escape(options.title) << "</text>\n";

    // plot frame
    svg << "<rect x=\"" << fmt2(left) << "\" y=\"" << fmt2(top) << "\" width=\"" << fmt2(pw)
        << "\" height=\"" << fmt2(ph) << "\" fill=\"none\" stroke=\"#333333\" "
           "stroke-width=\"1\"/>\n";

    // ticks
    const double ystep = nice_step(ymax - ymin, 5);
    for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax + 1e-12; y += ystep) {
        svg << "<line x1=\"" << fmt2(left - 4) << "\" y1=\"" << fmt2(py(y)) << "\" x2=\""
            << fmt2(left) << "\" y2=\"" << fmt2(py(y)) << "\" stroke=\"#333333\"/>\n"
            << "<text x=\"" << fmt2(left - 7) << "\" y=\"" << fmt2(py(y) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">";
        char lab[32];
        std::snprintf(lab, sizeof(lab), "%.4g", y + 0.0);
        svg << lab << "</text>\n";
    }
    const double xstep = nice_step(xmax, 8);
    for (double x = 0.0; x <= xmax + 1e-12; x += xstep) {
        svg << "<line x1=\"" << fmt2(px(x)) << "\" y1=\"" << fmt2(top + ph) << "\" x2=\""
            << fmt2(px(x)) << "\" y2=\"" << fmt2(top + ph + 4) << "\" stroke=\"#333333\"/>\n"
            << "<text x=\"" << fmt2(px(x)) << "\" y=\"" << fmt2(top + ph + 16)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">";
        char lab[32];
        std::snprintf(lab, sizeof(lab), "%.6g", x);
        svg << lab << "</text>\n";
    }

    // axis labels
    svg << "<text x=\"" << fmt2(left + pw / 2) << "\" y=\"" << fmt2(top + ph + 34)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(options.x_label) << "</text>\n";
    if (!options.y_label.empty())
        svg << "<text x=\"14\" y=\"" << fmt2(top + ph / 2)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
               "transform=\"rotate(-90 14 "
            << fmt2(top + ph / 2) << ")\">" << xml_escape(options.y_label) << "</text>\n";

    // std bands then mean lines, so every line stays visible
    for (std::size_t si = 0; si < series.size(); ++si) {
        const SvgSeries& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < len; ++i)
            svg << fmt2(px(static_cast<double>(i))) << ',' << fmt2(py(s.mean[i] + s.stddev[i]))
                << ' ';
        for (std::size_t i = len; i-- > 0;)
            svg << fmt2(px(static_cast<double>(i))) << ',' << fmt2(py(s.mean[i] - s.stddev[i]))
                << (i == 0 ? "" : " ");
        svg << "\"/>\n";
    }
    for (std::size_t si = 0; si < series.size(); ++si) {
        const SvgSeries& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < len; ++i)
            svg << fmt2(px(static_cast<double>(i))) << ',' << fmt2(py(s.mean[i]))
                << (i + 1 == len ? "" : " ");
        svg << "\"/>\n";
    }

    for (const SvgMarker& mk : markers) {
        svg << "<line x1=\"" << fmt2(px(mk.x)) << "\" y1=\"" << fmt2(top) << "\" x2=\""
            << fmt2(px(mk.x)) << "\" y2=\"" << fmt2(top + ph) << "\" stroke=\"" << kMarkerColor
            << "\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"/>\n";
        if (!mk.label.empty())
            svg << "<text x=\"" << fmt2(px(mk.x) + 4) << "\" y=\"" << fmt2(top + 12)
                << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << kMarkerColor
                << "\">" << xml_escape(mk.label) << "</text>\n";
    }

    // legend, top-right inside the frame
    const double lx = left + pw - 170, ly = top + 10;
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const double y = ly + 16.0 * static_cast<double>(si);
        svg << "<line x1=\"" << fmt2(lx) << "\" y1=\"" << fmt2(y) << "\" x2=\"" << fmt2(lx + 22)
            << "\" y2=\"" << fmt2(y) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << fmt2(lx + 28) << "\" y=\"" << fmt2(y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(series[si].label)
            << "</text>\n";
    }

    svg << "</svg>\n";
    std::ofstream out = open_out(path);
    out << svg.str();
    if (!out) throw IoError(path.string(), "write failed");
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for hashing");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw std::runtime_error("sha256: EVP_MD_CTX_new failed");
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 15];
    while (in.good()) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        if (got > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(got));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int dlen = 0;
    EVP_DigestFinal_ex(ctx, digest, &dlen);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(dlen * 2);
    for (unsigned int i = 0; i < dlen; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

RunManifest build_manifest(const std::string& config_json,
                           const std::vector<std::uint64_t>& seeds, const fs::path& dir,
                           const std::vector<std::string>& file_names) {
    RunManifest m;
    m.config_json = config_json;
    m.seeds = seeds;
    m.version = kVersion;
    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    m.created_utc = stamp;
    for (const std::string& name : file_names) {
        const fs::path p = dir / name;
        if (!fs::exists(p))
            throw ManifestInconsistent("manifest: missing output file " + p.string());
        m.files.push_back({name, sha256_file(p), fs::file_size(p)});
    }
    return m;
}

void write_manifest(const RunManifest& manifest, const fs::path& path) {
    json files = json::object();
    for (const ManifestFile& f : manifest.files)
        files[f.name] = {{"sha256", f.sha256}, {"bytes", f.bytes}};
    const json doc = {
        {"artifact", "freewill"},
        {"version", manifest.version},
        {"created_utc", manifest.created_utc},
        {"seeds", manifest.seeds},
        {"config", json::parse(manifest.config_json)},
        {"files", files},
    };
    std::ofstream out = open_out(path);
    out << doc.dump(2) << '\n';
    if (!out) throw IoError(path.string(), "write failed");
}

VerifyReport verify_manifest_dir(const fs::path& dir) {
    const fs::path mpath = dir / "manifest.json";
    std::ifstream in(mpath, std::ios::binary);
    if (!in) throw IoError(mpath.string(), "cannot open manifest");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError(mpath.string(), std::string("manifest parse: ") + e.what());
    }
    VerifyReport report;
    for (auto it = doc.at("files").begin(); it != doc.at("files").end(); ++it) {
        const fs::path p = dir / it.key();
        if (!fs::exists(p)) {
            report.ok = false;
            report.problems.push_back(it.key() + ": missing");
            continue;
        }
        if (sha256_file(p) != it.value().at("sha256").get<std::string>()) {
            report.ok = false;
            report.problems.push_back(it.key() + ": hash mismatch");
        }
    }
    return report;
}

void write_run_outputs(const AggregateResult& result, const RunConfig& config,
                       const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create output directory: " + ec.message());

    const PhaseSchedule& schedule = config.experiment.schedule;
    const long total = config.experiment.total_steps;
    const int window = config.experiment.metrics_window;
    std::vector<std::string> names;

    for (const RunTrace& run : result.runs) {
        const std::string name = "trace_seed" + std::to_string(run.seed) + ".csv";
        write_trace_csv(run, schedule, dir / name);
        names.push_back(name);
    }
    write_aggregate_csv(result, total, dir / "aggregate.csv");
    names.push_back("aggregate.csv");

    std::vector<SvgMarker> change_marks;
    for (long c : schedule.change_steps())
        change_marks.push_back({static_cast<double>(c), "change"});

    // The rolling-reward x axis starts at the end of the first window; its
    // change marker shifts left by the window length to stay aligned with
    // the underlying reward steps.
    std::vector<SvgMarker> rolling_marks;
    for (long c : schedule.change_steps())
        rolling_marks.push_back({std::max(0.0, static_cast<double>(c - window)), "change"});

    emit_svg({{"freewill", result.freewill.rolling_reward.mean, result.freewill.rolling_reward.stddev},
              {"baseline", result.baseline.rolling_reward.mean, result.baseline.rolling_reward.stddev}},
             rolling_marks, dir / "reward.svg",
             {"Rolling average reward (window=" + std::to_string(window) + ")", "time step",
              "reward"});
    names.push_back("reward.svg");

    emit_svg({{"freewill", result.freewill.entropy_bits.mean, result.freewill.entropy_bits.stddev},
              {"baseline", result.baseline.entropy_bits.mean, result.baseline.entropy_bits.stddev}},
             change_marks, dir / "entropy_bits.svg",
             {"Policy entropy", "time step", "entropy (bits)"});
    names.push_back("entropy_bits.svg");

    emit_svg({{"KL(freewill||baseline)", result.kl.mean, result.kl.stddev}}, change_marks,
             dir / "kl.svg", {"Policy divergence", "time step", "KL (nats)"});
    names.push_back("kl.svg");

    // Novelty zooms to the early steps; a change past the zoom edge is
    // marked at the edge itself.
    const std::size_t zoom = std::min<std::size_t>(
        static_cast<std::size_t>(config.report.novelty_zoom), result.freewill.novelty.mean.size());
    auto cut = [&](const std::vector<double>& v) {
        return std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(zoom));
    };
    std::vector<SvgMarker> novelty_marks;
    for (long c : schedule.change_steps())
        novelty_marks.push_back(
            {std::min(static_cast<double>(c), static_cast<double>(zoom - 1)), "change"});
    emit_svg({{"freewill", cut(result.freewill.novelty.mean), cut(result.freewill.novelty.stddev)},
              {"baseline", cut(result.baseline.novelty.mean), cut(result.baseline.novelty.stddev)}},
             novelty_marks, dir / "novelty.svg",
             {"Novelty score (zoom 0-" + std::to_string(zoom) + ")", "time step", "novelty"});
    names.push_back("novelty.svg");

    emit_svg({{"freewill", result.freewill.regret.mean, result.freewill.regret.stddev},
              {"baseline", result.baseline.regret.mean, result.baseline.regret.stddev}},
             change_marks, dir / "regret.svg",
             {"Cumulative regret", "time step", "regret"});
    names.push_back("regret.svg");

    const std::string config_json = config_to_json(config);
    {
        std::ofstream out = open_out(dir / "run_config.json");
        out << config_json;
        if (!out) throw IoError((dir / "run_config.json").string(), "write failed");
    }
    names.push_back("run_config.json");

    const RunManifest manifest =
        build_manifest(config_json, config.experiment.seeds, dir, names);
    write_manifest(manifest, dir / "manifest.json");
}

}  // namespace freewill
