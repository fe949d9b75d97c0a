#include "mlp.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "csv.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace chaos {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

void check_dims(const mlp_model& m) {
  if (m.nl < 1 || m.nh < 1 || m.w1.size() != m.nh * m.nl || m.b1.size() != m.nh ||
      m.w2.size() != m.nh) {
    throw error(errc::invalid_argument, "inconsistent model dimensions");
  }
}

struct gradients {
  std::vector<double> w1, b1, w2;
  double b2 = 0.0;

  explicit gradients(const mlp_model& m)
      : w1(m.w1.size(), 0.0), b1(m.b1.size(), 0.0), w2(m.w2.size(), 0.0) {}

  void zero() {
    std::fill(w1.begin(), w1.end(), 0.0);
    std::fill(b1.begin(), b1.end(), 0.0);
    std::fill(w2.begin(), w2.end(), 0.0);
    b2 = 0.0;
  }
};

// Accumulates gradients of the batch-mean squared error into g and returns
// that loss. `hidden` is nh of scratch.
double backprop_batch(const mlp_model& m, const double* x, const double* y, std::size_t batch,
                      std::size_t stride, gradients& g, std::vector<double>& hidden) {
  double loss = 0.0;
  double inv_batch = 1.0 / static_cast<double>(batch);
  for (std::size_t s = 0; s < batch; ++s) {
    const double* xi = x + s * stride;
    double pred = m.b2;
    for (std::size_t h = 0; h < m.nh; ++h) {
      const double* row = m.w1.data() + h * m.nl;
      double z = m.b1[h];
      for (std::size_t k = 0; k < m.nl; ++k) z += row[k] * xi[k];
      double a = sigmoid(z);
      hidden[h] = a;
      pred += m.w2[h] * a;
    }
    double err = pred - y[s];
    loss += err * err;
    double dpred = 2.0 * err * inv_batch;
    g.b2 += dpred;
    for (std::size_t h = 0; h < m.nh; ++h) {
      double a = hidden[h];
      g.w2[h] += dpred * a;
      double dz = dpred * m.w2[h] * a * (1.0 - a);
      g.b1[h] += dz;
      double* grow = g.w1.data() + h * m.nl;
      for (std::size_t k = 0; k < m.nl; ++k) grow[k] += dz * xi[k];
    }
  }
  return loss * inv_batch;
}

double batch_loss(const mlp_model& m, const double* x, const double* y, std::size_t batch,
                  std::size_t stride, std::vector<double>& hidden) {
  double loss = 0.0;
  for (std::size_t s = 0; s < batch; ++s) {
    const double* xi = x + s * stride;
    double pred = m.b2;
    for (std::size_t h = 0; h < m.nh; ++h) {
      const double* row = m.w1.data() + h * m.nl;
      double z = m.b1[h];
      for (std::size_t k = 0; k < m.nl; ++k) z += row[k] * xi[k];
      hidden[h] = sigmoid(z);
      pred += m.w2[h] * hidden[h];
    }
    double err = pred - y[s];
    loss += err * err;
  }
  return loss / static_cast<double>(batch);
}

// Adam state over one parameter array.
struct adam_lane {
  std::vector<double> m, v;
  explicit adam_lane(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;

void adam_update(std::span<double> w, std::span<const double> g, adam_lane& st, double lr,
                 double bc1, double bc2) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    st.m[i] = kBeta1 * st.m[i] + (1.0 - kBeta1) * g[i];
    st.v[i] = kBeta2 * st.v[i] + (1.0 - kBeta2) * g[i] * g[i];
    double mhat = st.m[i] / bc1;
    double vhat = st.v[i] / bc2;
    w[i] -= lr * mhat / (std::sqrt(vhat) + kEps);
  }
}

}  // namespace

mlp_model init_model(std::size_t nl, std::size_t nh, std::uint64_t seed) {
  if (nl < 1 || nh < 1) throw error(errc::invalid_argument, "nl and nh must be >= 1");
  mlp_model m;
  m.nl = nl;
  m.nh = nh;
  m.w1.resize(nh * nl);
  m.b1.assign(nh, 0.0);
  m.w2.resize(nh);
  m.b2 = 0.0;
  rng gen(seed);
  double lim1 = std::sqrt(6.0 / static_cast<double>(nl + nh));
  for (double& w : m.w1) w = gen.uniform(-lim1, lim1);
  double lim2 = std::sqrt(6.0 / static_cast<double>(nh + 1));
  for (double& w : m.w2) w = gen.uniform(-lim2, lim2);
  return m;
}

double forward(const mlp_model& m, std::span<const double> window) {
  check_dims(m);
  if (window.size() != m.nl) {
    throw error(errc::invalid_argument, "window length " + std::to_string(window.size()) +
                                            " does not match input width " + std::to_string(m.nl));
  }
  double out = m.b2;
  for (std::size_t h = 0; h < m.nh; ++h) {
    const double* row = m.w1.data() + h * m.nl;
    double z = m.b1[h];
    for (std::size_t k = 0; k < m.nl; ++k) z += row[k] * window[k];
    out += m.w2[h] * sigmoid(z);
  }
  return out;
}

mlp_model train(const labeled_dataset& ds, std::size_t nh, const train_config& cfg,
                std::vector<double>* epoch_loss) {
  if (ds.windows.empty()) throw error(errc::invalid_argument, "empty dataset");
  if (cfg.epochs < 1) throw error(errc::invalid_argument, "epochs must be >= 1");
  if (cfg.batch_size < 1) throw error(errc::invalid_argument, "batch_size must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw error(errc::invalid_argument, "learning_rate must be > 0");
  if (cfg.l2 < 0.0) throw error(errc::invalid_argument, "l2 must be >= 0");

  std::size_t n = ds.windows.size();
  std::size_t nl = ds.window_len();
  for (const auto& w : ds.windows) {
    if (w.values.size() != nl) throw error(errc::invalid_argument, "ragged window lengths");
  }

  // Contiguous copies for the hot loop.
  std::vector<double> x(n * nl);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(ds.windows[i].values.begin(), ds.windows[i].values.end(), x.begin() + i * nl);
  }
  const std::vector<double>& y = ds.targets;

  mlp_model model = init_model(nl, nh, cfg.seed);
  gradients g(model);
  adam_lane st_w1(model.w1.size()), st_b1(nh), st_w2(nh);
  adam_lane st_b2(1);
  std::vector<double> hidden(nh);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng shuffle_rng(derive_seed(cfg.seed, 0));

  std::vector<double> bx(cfg.batch_size * nl), by(cfg.batch_size);
  std::size_t t = 0;
  if (epoch_loss) epoch_loss->clear();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) shuffle_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      std::size_t b = std::min(cfg.batch_size, n - start);
      for (std::size_t s = 0; s < b; ++s) {
        std::size_t src = order[start + s];
        std::copy_n(x.begin() + src * nl, nl, bx.begin() + s * nl);
        by[s] = y[src];
      }
      g.zero();
      loss_sum += backprop_batch(model, bx.data(), by.data(), b, nl, g, hidden);
      ++batches;
      ++t;
      double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
      double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
      adam_update(model.w1, g.w1, st_w1, cfg.learning_rate, bc1, bc2);
      adam_update(model.b1, g.b1, st_b1, cfg.learning_rate, bc1, bc2);
      adam_update(model.w2, g.w2, st_w2, cfg.learning_rate, bc1, bc2);
      std::span<double> b2_span(&model.b2, 1);
      std::span<const double> gb2_span(&g.b2, 1);
      adam_update(b2_span, gb2_span, st_b2, cfg.learning_rate, bc1, bc2);
      if (cfg.l2 > 0.0) {
        // Decoupled weight decay (biases exempt).
        double decay = cfg.learning_rate * cfg.l2;
        for (double& w : model.w1) w -= decay * w;
        for (double& w : model.w2) w -= decay * w;
      }
    }
    double mean_loss = loss_sum / static_cast<double>(batches);
    if (!std::isfinite(mean_loss)) {
      throw error(errc::numeric, "training loss diverged at epoch " + std::to_string(epoch) +
                                     " (learning rate too large?)");
    }
    if (epoch_loss) epoch_loss->push_back(mean_loss);
  }
  return model;
}

double grad_check(const mlp_model& m, std::span<const std::vector<double>> inputs,
                  std::span<const double> targets, double fd_step) {
  check_dims(m);
  if (inputs.empty() || inputs.size() != targets.size()) {
    throw error(errc::invalid_argument, "batch must be nonempty with matching targets");
  }
  std::size_t b = inputs.size();
  std::vector<double> x(b * m.nl);
  for (std::size_t i = 0; i < b; ++i) {
    if (inputs[i].size() != m.nl) throw error(errc::invalid_argument, "input width mismatch");
    std::copy(inputs[i].begin(), inputs[i].end(), x.begin() + i * m.nl);
  }

  mlp_model probe = m;
  gradients g(probe);
  std::vector<double> hidden(m.nh);
  backprop_batch(probe, x.data(), targets.data(), b, m.nl, g, hidden);

  auto fd = [&](double* param) {
    double save = *param;
    *param = save + fd_step;
    double up = batch_loss(probe, x.data(), targets.data(), b, m.nl, hidden);
    *param = save - fd_step;
    double down = batch_loss(probe, x.data(), targets.data(), b, m.nl, hidden);
    *param = save;
    return (up - down) / (2.0 * fd_step);
  };

  double worst = 0.0;
  auto compare = [&](double analytic, double numeric) {
    double scale = std::max({1e-3, std::fabs(analytic), std::fabs(numeric)});
    worst = std::max(worst, std::fabs(analytic - numeric) / scale);
  };
  for (std::size_t i = 0; i < probe.w1.size(); ++i) compare(g.w1[i], fd(&probe.w1[i]));
  for (std::size_t i = 0; i < probe.b1.size(); ++i) compare(g.b1[i], fd(&probe.b1[i]));
  for (std::size_t i = 0; i < probe.w2.size(); ++i) compare(g.w2[i], fd(&probe.w2[i]));
  compare(g.b2, fd(&probe.b2));
  return worst;
}

mlp_model simplify_equal_weights(const mlp_model& m) {
  check_dims(m);
  if (m.nh != 1) throw error(errc::invalid_argument, "equal-weights simplification needs nh == 1");
  mlp_model out = m;
  double mean = std::accumulate(m.w1.begin(), m.w1.end(), 0.0) / static_cast<double>(m.w1.size());
  std::fill(out.w1.begin(), out.w1.end(), mean);
  return out;
}

std::string model_text(const mlp_model& m) {
  check_dims(m);
  std::ostringstream ss;
  ss << "chaos-sensor-mlp v1\n";
  ss << "nl " << m.nl << "\n";
  ss << "nh " << m.nh << "\n";
  ss << "hidden logistic\n";
  ss << "output identity\n";
  for (std::size_t h = 0; h < m.nh; ++h) {
    ss << "w1";
    for (std::size_t k = 0; k < m.nl; ++k) {
      ss << ' ' << csv::format_double(m.w1[h * m.nl + k], 17);
    }
    ss << '\n';
  }
  ss << "b1";
  for (double v : m.b1) ss << ' ' << csv::format_double(v, 17);
  ss << "\nw2";
  for (double v : m.w2) ss << ' ' << csv::format_double(v, 17);
  ss << "\nb2 " << csv::format_double(m.b2, 17) << '\n';
  return ss.str();
}

void save_model(const mlp_model& m, const std::string& path) {
  csv::atomic_write_text(path, model_text(m));
}

mlp_model load_model(const std::string& path) {
  std::istringstream in(csv::read_text(path));
  std::string line;
  auto next_line = [&](const std::string& what) {
    if (!std::getline(in, line)) throw error(errc::format, "truncated model file: missing " + what);
    return line;
  };

  if (next_line("magic") != "chaos-sensor-mlp v1") {
    throw error(errc::format, "not a model file: " + path);
  }
  auto parse_kv = [&](const std::string& key) {
    next_line(key);
    std::istringstream ls(line);
    std::string k;
    std::size_t v = 0;
    if (!(ls >> k >> v) || k != key) throw error(errc::format, "expected '" + key + "' line");
    return v;
  };
  mlp_model m;
  m.nl = parse_kv("nl");
  m.nh = parse_kv("nh");
  if (m.nl < 1 || m.nh < 1) throw error(errc::format, "bad dimensions in model file");
  if (next_line("hidden") != "hidden logistic") {
    throw error(errc::format, "unsupported hidden activation");
  }
  if (next_line("output") != "output identity") {
    throw error(errc::format, "unsupported output activation");
  }

  auto parse_row = [&](const std::string& key, std::size_t count) {
    next_line(key);
    std::istringstream ls(line);
    std::string k;
    if (!(ls >> k) || k != key) throw error(errc::format, "expected '" + key + "' line");
    std::vector<double> vals;
    vals.reserve(count);
    double v;
    while (ls >> v) vals.push_back(v);
    if (vals.size() != count) {
      throw error(errc::format, "'" + key + "' line has " + std::to_string(vals.size()) +
                                    " values, expected " + std::to_string(count));
    }
    return vals;
  };

  m.w1.reserve(m.nh * m.nl);
  for (std::size_t h = 0; h < m.nh; ++h) {
    auto row = parse_row("w1", m.nl);
    m.w1.insert(m.w1.end(), row.begin(), row.end());
  }
  m.b1 = parse_row("b1", m.nh);
  m.w2 = parse_row("w2", m.nh);
  m.b2 = parse_row("b2", 1)[0];
  return m;
}

}  // namespace chaos
