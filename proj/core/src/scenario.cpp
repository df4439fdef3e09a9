#include "gapfield/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gapfield {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad numeric value for " + key + ": '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

double parse_scalar(const std::string& v, const std::string& key) {
  const auto l = parse_list(v, key);
  if (l.size() != 1) throw ConfigError(key + " expects a single value");
  return l[0];
}

int parse_int(const std::string& v, const std::string& key) {
  const double d = parse_scalar(v, key);
  if (d != std::floor(d)) throw ConfigError(key + " expects an integer");
  return static_cast<int>(d);
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty value");

    if (key == "id") {
      sc.id = val;
    } else if (key == "geometry.family") {
      sc.geometry.family = val;
    } else if (key == "geometry.radius") {
      sc.geometry.radius = parse_scalar(val, key);
    } else if (key == "geometry.Q") {
      sc.geometry.Q = parse_list(val, key);
    } else if (key == "geometry.epsilon") {
      sc.geometry.epsilon = parse_scalar(val, key);
    } else if (key == "geometry.R0") {
      sc.geometry.R0 = parse_scalar(val, key);
    } else if (key == "geometry.kappa") {
      sc.geometry.kappa = parse_scalar(val, key);
    } else if (key == "geometry.dimension") {
      sc.geometry.dimension = parse_int(val, key);
    } else if (key == "coefficient.family") {
      sc.coefficient.family = val;
    } else if (key == "coefficient.lambda") {
      sc.coefficient.lambda = parse_scalar(val, key);
    } else if (key == "coefficient.Lambda") {
      sc.coefficient.Lambda = parse_scalar(val, key);
    } else if (key == "coefficient.alpha") {
      sc.coefficient.alpha = parse_scalar(val, key);
    } else if (key == "coefficient.amplitude") {
      sc.coefficient.amplitude = parse_scalar(val, key);
    } else if (key == "coefficient.wavevector") {
      sc.coefficient.wavevector = parse_list(val, key);
    } else if (key == "boundary.family") {
      sc.boundary.family = val;
    } else if (key == "boundary.direction") {
      sc.boundary.direction = parse_list(val, key);
    } else if (key == "boundary.quad_coeff") {
      sc.boundary.quad_coeff = parse_scalar(val, key);
    } else if (key == "numerics.target_cells") {
      sc.numerics.target_cells = parse_int(val, key);
    } else if (key == "numerics.vertical_cells") {
      sc.numerics.vertical_cells = parse_int(val, key);
    } else if (key == "numerics.c_grade") {
      sc.numerics.c_grade = parse_scalar(val, key);
    } else if (key == "numerics.tol") {
      sc.numerics.tol = parse_scalar(val, key);
    } else if (key == "numerics.max_iter") {
      sc.numerics.max_iter = parse_int(val, key);
    } else if (key == "numerics.gamma") {
      sc.numerics.gamma = parse_scalar(val, key);
    } else if (key == "numerics.precond") {
      sc.numerics.precond = val;
    } else if (key == "numerics.ssor_omega") {
      sc.numerics.ssor_omega = parse_scalar(val, key);
    } else if (key == "sweep.epsilons") {
      sc.sweep.epsilons = parse_list(val, key);
    } else if (key == "sweep.harnack_epsilons") {
      sc.sweep.harnack_epsilons = parse_list(val, key);
    } else if (key == "sweep.harnack_x0") {
      sc.sweep.harnack_x0 = parse_list(val, key);
    } else if (key == "layers.l_list") {
      for (double d : parse_list(val, key))
        sc.layers.l_list.push_back(static_cast<int>(d));
    } else if (key == "layers.seeds") {
      for (double d : parse_list(val, key))
        sc.layers.seeds.push_back(static_cast<std::uint64_t>(d));
    } else if (key == "layers.amplitude") {
      sc.layers.amplitude = parse_scalar(val, key);
    } else if (key == "layers.lateral_cells") {
      sc.layers.lateral_cells = parse_int(val, key);
    } else if (key == "layers.vertical_cells") {
      sc.layers.vertical_cells = parse_int(val, key);
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    }
  }
  sc.validate();
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario_text(ss.str());
}

void Scenario::validate() const {
  if (id.empty()) throw ConfigError("scenario needs an id");
  if (geometry.dimension != 2 && geometry.dimension != 3)
    throw ConfigError("geometry.dimension must be 2 or 3");
  if (geometry.family != "ball" && geometry.family != "quadratic")
    throw ConfigError("geometry.family must be ball or quadratic");
  if (geometry.family == "quadratic") {
    const int m = geometry.dimension - 1;
    if (static_cast<int>(geometry.Q.size()) != m * m)
      throw ConfigError("geometry.Q needs (n-1)^2 row-major entries");
  }
  if (geometry.epsilon <= 0.0) throw ConfigError("geometry.epsilon > 0");
  if (coefficient.family != "identity" &&
      coefficient.family != "smooth-perturbation" &&
      coefficient.family != "layered")
    throw ConfigError("unsupported coefficient.family");
  if (coefficient.alpha <= 0.0 || coefficient.alpha >= 1.0)
    throw ConfigError("coefficient.alpha must lie in (0,1)");
  if (boundary.family != "linear" && boundary.family != "harmonic-quadratic")
    throw ConfigError("unsupported boundary.family");
  if (!boundary.direction.empty() &&
      static_cast<int>(boundary.direction.size()) != geometry.dimension)
    throw ConfigError("boundary.direction needs n entries");
  if (numerics.gamma <= 0.0 || numerics.gamma >= 1.0)
    throw ConfigError("numerics.gamma must lie in (0,1)");
  if (numerics.precond != "none" && numerics.precond != "jacobi" &&
      numerics.precond != "ssor")
    throw ConfigError("numerics.precond must be none, jacobi or ssor");
  if (!sweep.epsilons.empty()) {
    if (sweep.epsilons.size() < 4)
      throw ConfigError("sweep.epsilons needs >= 4 values");
    for (std::size_t i = 0; i < sweep.epsilons.size(); ++i) {
      if (sweep.epsilons[i] <= 0.0)
        throw ConfigError("sweep.epsilons must be positive");
      if (i > 0 && sweep.epsilons[i] >= sweep.epsilons[i - 1])
        throw ConfigError("sweep.epsilons must be strictly decreasing");
    }
  }
  for (int l : layers.l_list)
    if (l < 1 || l > 64) throw ConfigError("layers.l_list entries in [1,64]");
}

double Scenario::lateral_extent() const {
  const double inscribed =
      geometry.R0 / std::sqrt(static_cast<double>(geometry.dimension - 1));
  return inscribed * (1.0 - 1e-6);  // strictly inside the validity disk
}

GapGeometry Scenario::make_geometry(double epsilon) const {
  const int n = geometry.dimension;
  if (geometry.family == "ball") {
    return GapGeometry(
        InclusionProfile::ball(geometry.radius, Orientation::Upper, n - 1),
        InclusionProfile::ball(geometry.radius, Orientation::Lower, n - 1),
        epsilon, geometry.R0, geometry.kappa, n);
  }
  const int m = n - 1;
  LatMat Q(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      Q(i, j) = geometry.Q[static_cast<std::size_t>(i * m + j)];
  return GapGeometry(InclusionProfile::quadratic(Q, Orientation::Upper),
                     InclusionProfile::quadratic(Q, Orientation::Lower),
                     epsilon, geometry.R0, geometry.kappa, n);
}

CoefficientField Scenario::make_coefficient() const {
  const int n = geometry.dimension;
  if (coefficient.family == "identity") return CoefficientField::identity(n);
  if (coefficient.family == "smooth-perturbation") {
    VecN k(n);
    for (int d = 0; d < n; ++d)
      k[d] = d < static_cast<int>(coefficient.wavevector.size())
                 ? coefficient.wavevector[static_cast<std::size_t>(d)]
                 : 0.0;
    return CoefficientField::smooth_perturbation(n, coefficient.amplitude, k);
  }
  throw ConfigError(
      "layered coefficients drive the layers subcommand, not the gap solves");
}

BoundaryData Scenario::make_boundary() const {
  const int n = geometry.dimension;
  VecN dir = VecN::Zero(n);
  if (boundary.direction.empty()) {
    dir[0] = 1.0;
  } else {
    for (int d = 0; d < n; ++d)
      dir[d] = boundary.direction[static_cast<std::size_t>(d)];
  }
  if (boundary.family == "linear") return BoundaryData::linear(dir);
  return BoundaryData::harmonic_quadratic(dir, boundary.quad_coeff);
}

PrecondKind Scenario::precond_kind() const {
  if (numerics.precond == "none") return PrecondKind::None;
  if (numerics.precond == "jacobi") return PrecondKind::Jacobi;
  return PrecondKind::Ssor;
}

}  // namespace gapfield
