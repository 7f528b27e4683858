#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "leaklab/harness.hpp"

namespace leaklab::harness {

namespace {

using nlohmann::json;

json summary_to_json(const stats::EffectSummary& s) {
    return json{{"n_datasets", s.n_datasets}, {"mean_delta", s.mean_delta},
                {"dz_defined", s.dz_defined}, {"dz", s.dz},
                {"dz_ci_lo", s.dz_ci_lo},     {"dz_ci_hi", s.dz_ci_hi},
                {"prevalence", s.prevalence}, {"median_delta", s.median_delta}};
}

stats::EffectSummary summary_from_json(const json& j) {
    stats::EffectSummary s;
    s.n_datasets = j.at("n_datasets").get<int>();
    s.mean_delta = j.at("mean_delta").get<double>();
    s.dz_defined = j.at("dz_defined").get<bool>();
    s.dz = j.at("dz").get<double>();
    s.dz_ci_lo = j.at("dz_ci_lo").get<double>();
    s.dz_ci_hi = j.at("dz_ci_hi").get<double>();
    s.prevalence = j.at("prevalence").get<double>();
    s.median_delta = j.at("median_delta").get<double>();
    return s;
}

json point_to_json(const DosePoint& p) {
    return json{{"dose", p.dose}, {"mean_delta", p.mean_delta}, {"ci_lo", p.ci_lo},
                {"ci_hi", p.ci_hi}, {"n", p.n}};
}

DosePoint point_from_json(const json& j) {
    DosePoint p;
    p.dose = j.at("dose").get<double>();
    p.mean_delta = j.at("mean_delta").get<double>();
    p.ci_lo = j.at("ci_lo").get<double>();
    p.ci_hi = j.at("ci_hi").get<double>();
    p.n = j.at("n").get<int>();
    return p;
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_report: cannot write " + path.string());
    out << content;
}

} // namespace

void save_report(const Report& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    json j;
    j["run_id"] = report.run_id;
    j["n_records"] = report.n_records;
    j["n_skips"] = report.n_skips;
    j["n_corrupt_lines"] = report.n_corrupt_lines;
    j["experiments"] = json::array();
    for (const auto& er : report.experiments) {
        json e;
        e["exp_id"] = er.exp_id;
        e["leak_class"] = er.leak_class;
        for (const auto& [split, s] : er.by_split) e["by_split"][split] = summary_to_json(s);
        e["dataset_deltas"] = json::array();
        for (const auto& [id, d] : er.dataset_deltas) e["dataset_deltas"].push_back(json{{"id", id}, {"delta", d}});
        j["experiments"].push_back(std::move(e));
    }
    for (const auto& [curve, points] : report.dose_curves)
        for (const auto& p : points) j["dose_curves"][curve].push_back(point_to_json(p));
    for (const auto& [mech, points] : report.nscaling)
        for (const auto& p : points) j["nscaling"][mech].push_back(point_to_json(p));
    j["coverage"] = report.coverage;
    j["coverage_n"] = report.coverage_n;
    j["decomposition"] = json::array();
    for (const auto& [dose, d] : report.decomposition)
        j["decomposition"].push_back(json{{"n", dose},
                                          {"sigma_hat", d.sigma_hat},
                                          {"noise", d.noise_component},
                                          {"diversity", d.diversity_component},
                                          {"noise_fraction", d.noise_fraction},
                                          {"clamped", d.clamped},
                                          {"k_peek", d.k_peek},
                                          {"k_seed", d.k_seed}});
    j["extras"] = report.extras;
    write_file(std::filesystem::path(out_dir) / "report.json", j.dump(2) + "\n");
}

Report load_report(const std::string& report_dir) {
    const auto path = std::filesystem::path(report_dir) / "report.json";
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_report: cannot open " + path.string());
    json j;
    in >> j;
    Report report;
    report.run_id = j.value("run_id", "");
    report.n_records = j.value("n_records", 0);
    report.n_skips = j.value("n_skips", 0);
    report.n_corrupt_lines = j.value("n_corrupt_lines", 0);
    for (const auto& e : j.value("experiments", json::array())) {
        ExperimentReport er;
        er.exp_id = e.at("exp_id").get<std::string>();
        er.leak_class = e.at("leak_class").get<std::string>();
        if (e.contains("by_split"))
            for (const auto& [split, s] : e.at("by_split").items())
                er.by_split[split] = summary_from_json(s);
        for (const auto& d : e.value("dataset_deltas", json::array()))
            er.dataset_deltas.emplace_back(d.at("id").get<std::string>(), d.at("delta").get<double>());
        report.experiments.push_back(std::move(er));
    }
    if (j.contains("dose_curves"))
        for (const auto& [curve, points] : j.at("dose_curves").items())
            for (const auto& p : points) report.dose_curves[curve].push_back(point_from_json(p));
    if (j.contains("nscaling"))
        for (const auto& [mech, points] : j.at("nscaling").items())
            for (const auto& p : points) report.nscaling[mech].push_back(point_from_json(p));
    if (j.contains("coverage")) report.coverage = j.at("coverage").get<std::map<std::string, double>>();
    if (j.contains("coverage_n")) report.coverage_n = j.at("coverage_n").get<std::map<std::string, int>>();
    for (const auto& d : j.value("decomposition", json::array())) {
        stats::DecompositionResult r;
        r.sigma_hat = d.at("sigma_hat").get<double>();
        r.noise_component = d.at("noise").get<double>();
        r.diversity_component = d.at("diversity").get<double>();
        r.noise_fraction = d.at("noise_fraction").get<double>();
        r.clamped = d.at("clamped").get<bool>();
        r.k_peek = d.at("k_peek").get<int>();
        r.k_seed = d.at("k_seed").get<int>();
        report.decomposition.emplace_back(d.at("n").get<double>(), r);
    }
    if (j.contains("extras")) report.extras = j.at("extras").get<std::map<std::string, double>>();
    return report;
}

void emit_report(const Report& report, const std::string& format, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    if (format == "csv") {
        std::string summary = "exp_id,leak_class,split,n_datasets,mean_delta,dz,dz_ci_lo,dz_ci_hi,prevalence,median_delta\n";
        for (const auto& er : report.experiments)
            for (const auto& [split, s] : er.by_split)
                summary += er.exp_id + "," + er.leak_class + "," + split + "," +
                           std::to_string(s.n_datasets) + "," + csv_num(s.mean_delta) + "," +
                           (s.dz_defined ? csv_num(s.dz) : "NA") + "," +
                           (s.dz_defined ? csv_num(s.dz_ci_lo) : "NA") + "," +
                           (s.dz_defined ? csv_num(s.dz_ci_hi) : "NA") + "," + csv_num(s.prevalence) +
                           "," + csv_num(s.median_delta) + "\n";
        write_file(dir / "summary.csv", summary);

        std::string deltas = "exp_id,dataset_id,mean_delta\n";
        for (const auto& er : report.experiments)
            for (const auto& [id, d] : er.dataset_deltas)
                deltas += er.exp_id + "," + id + "," + csv_num(d) + "\n";
        write_file(dir / "deltas.csv", deltas);

        std::string dose = "curve,K,mean_delta,ci_lo,ci_hi,n\n";
        for (const auto& [curve, points] : report.dose_curves)
            for (const auto& p : points)
                dose += curve + "," + csv_num(p.dose) + "," + csv_num(p.mean_delta) + "," +
                        csv_num(p.ci_lo) + "," + csv_num(p.ci_hi) + "," + std::to_string(p.n) + "\n";
        write_file(dir / "dose_response.csv", dose);

        std::string nsc = "mech,n,mean_delta,ci_lo,ci_hi,n_datasets\n";
        for (const auto& [mech, points] : report.nscaling)
            for (const auto& p : points)
                nsc += mech + "," + csv_num(p.dose) + "," + csv_num(p.mean_delta) + "," +
                       csv_num(p.ci_lo) + "," + csv_num(p.ci_hi) + "," + std::to_string(p.n) + "\n";
        write_file(dir / "nscaling.csv", nsc);

        std::string cov = "method,coverage,n\n";
        for (const auto& [key, c] : report.coverage) {
            const auto n_it = report.coverage_n.find(key);
            cov += key + "," + csv_num(c) + "," +
                   std::to_string(n_it == report.coverage_n.end() ? 0 : n_it->second) + "\n";
        }
        write_file(dir / "coverage.csv", cov);

        std::string dec = "n,sigma_hat,noise,diversity,noise_fraction,clamped,k_peek,k_seed\n";
        for (const auto& [dose, d] : report.decomposition)
            dec += csv_num(dose) + "," + csv_num(d.sigma_hat) + "," + csv_num(d.noise_component) +
                   "," + csv_num(d.diversity_component) + "," + csv_num(d.noise_fraction) + "," +
                   (d.clamped ? "1" : "0") + "," + std::to_string(d.k_peek) + "," +
                   std::to_string(d.k_seed) + "\n";
        write_file(dir / "decomposition.csv", dec);

        std::string extras = "key,value\n";
        for (const auto& [key, value] : report.extras) extras += key + "," + csv_num(value) + "\n";
        write_file(dir / "extras.csv", extras);
        return;
    }

    if (format == "markdown") {
        // Taxonomy-style table: one row per leak class present, with the
        // experiments and the pooled effect ranges behind it.
        struct ClassRow {
            std::set<std::string> experiments;
            double dz_lo = 0, dz_hi = 0, d_lo = 0, d_hi = 0;
            bool any = false;
        };
        std::map<std::string, ClassRow> rows;
        for (const auto& er : report.experiments) {
            auto it = er.by_split.find("pooled");
            if (it == er.by_split.end()) continue;
            auto& row = rows[er.leak_class];
            row.experiments.insert(er.exp_id);
            const auto& s = it->second;
            const double dz = s.dz_defined ? s.dz : 0.0;
            if (!row.any) {
                row.dz_lo = row.dz_hi = dz;
                row.d_lo = row.d_hi = s.mean_delta;
                row.any = true;
            } else {
                row.dz_lo = std::min(row.dz_lo, dz);
                row.dz_hi = std::max(row.dz_hi, dz);
                row.d_lo = std::min(row.d_lo, s.mean_delta);
                row.d_hi = std::max(row.d_hi, s.mean_delta);
            }
        }
        std::string md = "# Leakage taxonomy summary\n\n";
        md += "| Class | Experiments | d_z range | mean dAUC range |\n";
        md += "|-------|-------------|-----------|------------------|\n";
        for (const auto& [cls, row] : rows) {
            std::string exps;
            for (const auto& e : row.experiments) exps += (exps.empty() ? "" : ", ") + e;
            md += "| " + cls + " | " + exps + " | " + csv_num(row.dz_lo) + " .. " +
                  csv_num(row.dz_hi) + " | " + csv_num(row.d_lo) + " .. " + csv_num(row.d_hi) +
                  " |\n";
        }
        md += "\n## Per-experiment summaries (pooled split)\n\n";
        md += "| Experiment | Class | N | mean dAUC | d_z | 95% CI | prevalence | median |\n";
        md += "|------------|-------|---|-----------|-----|--------|------------|--------|\n";
        for (const auto& er : report.experiments) {
            auto it = er.by_split.find("pooled");
            if (it == er.by_split.end()) continue;
            const auto& s = it->second;
            md += "| " + er.exp_id + " | " + er.leak_class + " | " + std::to_string(s.n_datasets) +
                  " | " + csv_num(s.mean_delta) + " | " + (s.dz_defined ? csv_num(s.dz) : "NA") +
                  " | " +
                  (s.dz_defined ? "[" + csv_num(s.dz_ci_lo) + ", " + csv_num(s.dz_ci_hi) + "]"
                                : "NA") +
                  " | " + csv_num(s.prevalence) + " | " + csv_num(s.median_delta) + " |\n";
        }
        write_file(dir / "taxonomy.md", md);
        return;
    }

    throw std::invalid_argument("emit_report: unknown format '" + format + "' (csv|markdown)");
}

} // namespace leaklab::harness
