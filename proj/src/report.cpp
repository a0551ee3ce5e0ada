#include "flexcomm/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace flexcomm {

namespace {

std::string num_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string num_display(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

const ScheduleSolution& checked(const ScenarioRun& run, RunMode expected) {
  if (run.mode != expected)
    throw ModeMissing("expected a " + std::string(to_string(expected)) +
                      " run, got " + std::string(to_string(run.mode)));
  if (run.solution.status == SolutionStatus::infeasible ||
      run.solution.buildings.empty())
    throw ModeMissing(std::string(to_string(expected)) + " run is not solved");
  return run.solution;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out.good()) throw IoError("failed writing '" + path + "'");
}

}  // namespace

ReportBundle build_cost_table(const ScenarioRun& baseline,
                              const ScenarioRun& individual,
                              const ScenarioRun& community) {
  const ScheduleSolution& base = checked(baseline, RunMode::baseline);
  const ScheduleSolution& ind = checked(individual, RunMode::individual);
  const ScheduleSolution& com = checked(community, RunMode::community);
  const std::size_t n = base.buildings.size();
  if (ind.buildings.size() != n || com.buildings.size() != n)
    throw ModeMissing("runs cover different building sets");

  ReportBundle bundle;
  bundle.total.building = "total";
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& id = base.buildings[i].building_id;
    if (ind.buildings[i].building_id != id || com.buildings[i].building_id != id)
      throw ModeMissing("runs cover different building sets");
    CostTableRow row;
    row.building = id;
    row.base_ce = base.buildings[i].costs.electricity_cost_eur;
    row.ind_ce = ind.buildings[i].costs.electricity_cost_eur;
    row.ind_cev = -ind.buildings[i].costs.ev_revenue_eur;
    row.ind_obj = ind.buildings[i].costs.objective_eur;
    row.com_ce = com.buildings[i].costs.electricity_cost_eur;
    row.com_cev = -com.buildings[i].costs.ev_revenue_eur;
    row.com_obj = com.buildings[i].costs.objective_eur;
    bundle.total.base_ce += row.base_ce;
    bundle.total.ind_ce += row.ind_ce;
    bundle.total.ind_cev += row.ind_cev;
    bundle.total.ind_obj += row.ind_obj;
    bundle.total.com_ce += row.com_ce;
    bundle.total.com_cev += row.com_cev;
    bundle.total.com_obj += row.com_obj;
    bundle.rows.push_back(std::move(row));
  }
  return bundle;
}

std::string render_cost_table_csv(const ReportBundle& bundle) {
  std::string out = "building,base_ce,ind_ce,ind_cev,ind_obj,com_ce,com_cev,com_obj\n";
  auto line = [&out](const CostTableRow& r) {
    out += r.building;
    for (double v : {r.base_ce, r.ind_ce, r.ind_cev, r.ind_obj, r.com_ce,
                     r.com_cev, r.com_obj})
      out += "," + num_full(v);
    out += "\n";
  };
  for (const CostTableRow& r : bundle.rows) line(r);
  line(bundle.total);
  return out;
}

std::string render_cost_table_text(const ReportBundle& bundle) {
  const std::vector<std::string> headers = {"building", "base_ce", "ind_ce",
                                            "ind_cev",  "ind_obj", "com_ce",
                                            "com_cev",  "com_obj"};
  // Collect display cells, then size each column to its widest entry.
  std::vector<std::vector<std::string>> cells;
  auto row_cells = [](const CostTableRow& r) {
    std::vector<std::string> c = {r.building};
    for (double v : {r.base_ce, r.ind_ce, r.ind_cev, r.ind_obj, r.com_ce,
                     r.com_cev, r.com_obj})
      c.push_back(num_display(v));
    return c;
  };
  for (const CostTableRow& r : bundle.rows) cells.push_back(row_cells(r));
  cells.push_back(row_cells(bundle.total));

  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += "  ";
      if (c == 0) {  // names left-aligned, numbers right-aligned
        out += row[c];
        out.append(width[c] - row[c].size(), ' ');
      } else {
        out.append(width[c] - row[c].size(), ' ');
        out += row[c];
      }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  };
  emit(headers);
  for (const auto& row : cells) emit(row);
  return out;
}

ReportBundle emit_cost_table(const ScenarioRun& baseline,
                             const ScenarioRun& individual,
                             const ScenarioRun& community,
                             const std::string& out_dir) {
  ReportBundle bundle = build_cost_table(baseline, individual, community);
  std::filesystem::create_directories(out_dir);
  const std::string csv_path =
      (std::filesystem::path(out_dir) / "costs.csv").string();
  const std::string txt_path =
      (std::filesystem::path(out_dir) / "costs.txt").string();
  write_text_file(csv_path, render_cost_table_csv(bundle));
  write_text_file(txt_path, render_cost_table_text(bundle));
  bundle.files = {csv_path, txt_path};
  return bundle;
}

std::vector<std::string> emit_series(const Scenario& scenario,
                                     const ScenarioRun& run,
                                     const std::string& out_dir) {
  const ScheduleSolution& sol = checked(run, run.mode);
  if (sol.buildings.size() != scenario.buildings.size())
    throw ModeMissing("run does not match the scenario's building set");
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> files;
  for (std::size_t i = 0; i < sol.buildings.size(); ++i) {
    const BuildingSolution& b = sol.buildings[i];
    const Eigen::VectorXd& base = scenario.buildings[i].net_load_kw;
    if (scenario.buildings[i].id != b.building_id)
      throw ModeMissing("run does not match the scenario's building set");
    std::string text = "step,net_load_baseline_kw,net_load_with_evs_kw,comm_flow_kw\n";
    for (int h = 0; h < scenario.grid.steps; ++h) {
      double with_evs = base[h];
      for (const EvSchedule& ev : b.evs)
        with_evs += ev.charge_kw[h] - ev.discharge_kw[h];
      double comm_flow = 0.0;
      if (b.comm_export_kw.size() > 0) comm_flow += b.comm_export_kw[h];
      if (b.comm_import_kw.size() > 0) comm_flow -= b.comm_import_kw[h];
      text += std::to_string(h) + "," + num_full(base[h]) + "," +
              num_full(with_evs) + "," + num_full(comm_flow) + "\n";
    }
    const std::string path =
        (std::filesystem::path(out_dir) /
         ("series_" + std::string(to_string(run.mode)) + "_" + b.building_id + ".csv"))
            .string();
    write_text_file(path, text);
    files.push_back(path);
  }
  return files;
}

}  // namespace flexcomm
