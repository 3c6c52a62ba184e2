#include "rsot/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rsot/quadrature.hpp"

namespace rsot {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

bool numeric_field(const std::string& s) {
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end != s.c_str();
}

}  // namespace

PointCloud load_point_cloud(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open point cloud: " + path);
  PointCloud cloud;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (first && !numeric_field(fields[0])) {
      first = false;
      continue;  // header row
    }
    first = false;
    if (fields.size() < 2 || fields.size() > 4)
      throw std::runtime_error("point cloud " + path +
                               ": expected 2-4 columns, got " +
                               std::to_string(fields.size()));
    const int dim = static_cast<int>(fields.size()) - 1;
    if (cloud.dim == 0) cloud.dim = dim;
    if (dim != cloud.dim)
      throw std::runtime_error("point cloud " + path +
                               ": inconsistent column count");
    Point p{0.0, 0.0, 0.0};
    for (int c = 0; c < dim; ++c)
      p[static_cast<std::size_t>(c)] = std::stod(fields[static_cast<std::size_t>(c)]);
    cloud.points.push_back(p);
    cloud.weights.push_back(std::stod(fields.back()));
  }
  if (cloud.points.empty())
    throw std::runtime_error("point cloud " + path + ": no rows");
  return cloud;
}

void write_point_cloud(const std::string& path, int dim,
                       const PointList& points,
                       const std::vector<double>& weights) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write point cloud: " + path);
  out.precision(17);
  const char* headers[] = {"", "x,weight", "x,y,weight", "x,y,z,weight"};
  out << headers[dim] << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int c = 0; c < dim; ++c)
      out << points[i][static_cast<std::size_t>(c)] << ",";
    out << weights[i] << "\n";
  }
}

TargetMeasure load_target_measure(const std::string& path) {
  const PointCloud cloud = load_point_cloud(path);
  TargetMeasure target;
  target.dim = cloud.dim;
  target.points = cloud.points;
  target.weights = cloud.weights;
  double sum = 0.0;
  for (double w : target.weights) {
    if (!(w > 0.0))
      throw std::runtime_error("target measure " + path +
                               ": nonpositive weight");
    sum += w;
  }
  for (double& w : target.weights) w /= sum;
  return target;
}

void write_potential(const std::string& path, const DualPotential& psi) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write potential: " + path);
  out.precision(17);
  out << "index,psi\n";
  for (std::size_t j = 0; j < psi.size(); ++j)
    out << j << "," << psi.values[j] << "\n";
}

DualPotential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open potential: " + path);
  DualPotential psi;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (first && !numeric_field(fields[0])) {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 2)
      throw std::runtime_error("potential " + path + ": expected 2 columns");
    psi.values.push_back(std::stod(fields[1]));
  }
  return psi;
}

std::vector<double> load_scalar_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && !numeric_field(line)) {
      first = false;
      continue;
    }
    first = false;
    values.push_back(std::stod(line));
  }
  return values;
}

void write_scalar_column(const std::string& path, const std::string& header,
                         const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.precision(17);
  out << header << "\n";
  for (double v : values) out << v << "\n";
}

void write_report(const std::string& path, const SolverReport& report) {
  nlohmann::json j;
  j["converged"] = report.converged;
  std::vector<int> iters;
  std::vector<double> eps_stages;
  std::vector<double> cutoffs;
  for (const auto& stage : report.stages) {
    iters.push_back(stage.iterations);
    eps_stages.push_back(stage.epsilon);
    for (double c : stage.cutoff_history) cutoffs.push_back(c);
  }
  j["iterations_per_level"] = iters;
  j["evaluations"] = report.total_evaluations();
  j["grad_l1"] =
      report.stages.empty() ? 0.0 : report.stages.back().final_grad_l1;
  j["wall_ms"] = report.total_wall_ms();
  j["epsilon_stages"] = eps_stages;
  j["cutoff_history"] = cutoffs;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << j.dump(2) << "\n";
}

namespace {

void write_manifest(const std::string& dir,
                    const std::vector<std::string>& files) {
  std::ofstream out(dir + "/levels.txt");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  for (const auto& f : files) out << f << "\n";
}

std::vector<std::string> read_manifest(const std::string& manifest) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot open manifest: " + manifest);
  std::vector<std::string> files;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) files.push_back(line);
  if (files.empty()) throw std::runtime_error("empty manifest: " + manifest);
  const auto base = std::filesystem::path(manifest).parent_path();
  for (auto& f : files) f = (base / f).string();
  return files;
}

}  // namespace

void write_target_hierarchy(const std::string& dir,
                            const TargetHierarchy& hier) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (std::size_t l = 0; l < hier.levels.size(); ++l) {
    const std::string name = "level_" + std::to_string(l) + ".csv";
    write_point_cloud(dir + "/" + name, hier.levels[l].dim,
                      hier.levels[l].points, hier.levels[l].weights);
    files.push_back(name);
  }
  write_manifest(dir, files);
}

TargetHierarchy load_target_hierarchy_levels(const std::string& manifest) {
  TargetHierarchy hier;
  for (const auto& file : read_manifest(manifest))
    hier.levels.push_back(load_target_measure(file));
  return hier;
}

void write_source_hierarchy(const std::string& dir,
                            const SourceHierarchy& hier) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (std::size_t l = 0; l < hier.levels.size(); ++l) {
    const std::string name = "level_" + std::to_string(l) + ".csv";
    write_point_cloud(dir + "/" + name, hier.levels[l].dim,
                      hier.levels[l].points, hier.levels[l].masses);
    files.push_back(name);
  }
  write_manifest(dir, files);
}

SourceHierarchy load_source_hierarchy_levels(const std::string& manifest) {
  SourceHierarchy hier;
  for (const auto& file : read_manifest(manifest)) {
    const PointCloud cloud = load_point_cloud(file);
    hier.levels.push_back(
        atoms_from_point_cloud(cloud.dim, cloud.points, cloud.weights));
  }
  return hier;
}

}  // namespace rsot
