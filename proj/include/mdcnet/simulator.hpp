#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "mdcnet/config.hpp"
#include "mdcnet/error.hpp"
#include "mdcnet/geometry.hpp"
#include "mdcnet/rng.hpp"
#include "mdcnet/stats.hpp"

namespace mdcnet {

// Who may transmit to one MDC in the same slot.
enum class SensorAccess { concurrent, one_per_mdc };
// Who may transmit to one AP in the same slot.
enum class ApAccess { concurrent, one_per_ap };

struct SimOptions {
  SensorAccess sensor_access = SensorAccess::one_per_mdc;
  ApAccess ap_access = ApAccess::one_per_ap;
  // Interferers closer than this get an exact Rayleigh draw; farther ones contribute
  // their mean power.
  double fading_radius = 200.0;
};

enum class MdcPhase : std::uint8_t { pausing, walking, moving_to_ap, transmitting };

inline constexpr double kNoTime = -1.0;

struct Packet {
  double t_arrival = 0;
  double t_first_attempt = kNoTime;
  double t_mdc = kNoTime;       // received by an MDC
  double t_tx_start = kNoTime;  // carrying MDC reached its aggregation stop point
  std::uint32_t sensor = 0;
  std::uint32_t cycle = 0;  // sensor cycle index at arrival
  std::uint32_t attempts_s = 0;
  std::uint32_t attempts_m = 0;
};

struct SensorState {
  Vec2 position;
  std::deque<std::uint32_t> queue;  // packet ids, FCFS
  bool in_contact = false;
  std::uint32_t cycle_index = 0;
  std::size_t eligible = 0;  // queue prefix holding previous-cycle packets
  int serving_mdc = -1;
  double contact_start = kNoTime;
  double last_contact_end = kNoTime;
};

struct MdcState {
  Vec2 position;
  MdcPhase phase = MdcPhase::pausing;
  double phase_timer = 0;  // s
  Vec2 heading{1.0, 0.0};
  std::vector<std::uint32_t> buffer;
  std::size_t sent = 0;
  int target_ap = -1;
  Vec2 stop_point;
  double collect_start = 0;
  double trigger_time = kNoTime;
  double tx_start = kNoTime;
  bool sensor_contact = false;
  double sensor_gap_start = kNoTime;

  std::size_t buffer_count() const { return buffer.size() - sent; }
  bool collecting() const { return phase == MdcPhase::pausing || phase == MdcPhase::walking; }
};

// Per-replication measurements, all post warm-up.
struct SimMetrics {
  double e_ct = NAN, e_ict = NAN, e_ict_s = NAN;
  double p_cov_m = NAN, p_cov_a = NAN;
  double d_q_s = NAN, d_t_s = NAN, d_q_m = NAN, d_buf_m = NAN, d_t_m = NAN, total_delay = NAN;
  double mdc_sojourn = NAN;  // MDC receipt to AP receipt
  double e_sensor = NAN, e_network = NAN;
  double lambda_s_eff = NAN, lambda_m_eff = NAN, p_act_m = NAN;
  double t_collect = NAN, t_smov = NAN, t_trans = NAN;
  double mean_queue = NAN;
  double delivered = 0, contacts = 0, sensor_attempts = 0, ap_attempts = 0, batches = 0;
  double sensors = 0, mdcs = 0, aps = 0;
};

struct MetricField {
  std::string_view name;
  double SimMetrics::*member;
};

inline const std::vector<MetricField>& sim_metric_fields() {
  static const std::vector<MetricField> f = {
      {"e_ct", &SimMetrics::e_ct},
      {"e_ict", &SimMetrics::e_ict},
      {"e_ict_s", &SimMetrics::e_ict_s},
      {"p_cov_m", &SimMetrics::p_cov_m},
      {"p_cov_a", &SimMetrics::p_cov_a},
      {"d_q_s", &SimMetrics::d_q_s},
      {"d_t_s", &SimMetrics::d_t_s},
      {"d_q_m", &SimMetrics::d_q_m},
      {"d_buf_m", &SimMetrics::d_buf_m},
      {"d_t_m", &SimMetrics::d_t_m},
      {"total_delay", &SimMetrics::total_delay},
      {"mdc_sojourn", &SimMetrics::mdc_sojourn},
      {"e_sensor", &SimMetrics::e_sensor},
      {"e_network", &SimMetrics::e_network},
      {"lambda_s_eff", &SimMetrics::lambda_s_eff},
      {"lambda_m_eff", &SimMetrics::lambda_m_eff},
      {"p_act_m", &SimMetrics::p_act_m},
      {"t_collect", &SimMetrics::t_collect},
      {"t_smov", &SimMetrics::t_smov},
      {"t_trans", &SimMetrics::t_trans},
      {"mean_queue", &SimMetrics::mean_queue},
      {"delivered", &SimMetrics::delivered},
      {"contacts", &SimMetrics::contacts},
      {"sensor_attempts", &SimMetrics::sensor_attempts},
      {"ap_attempts", &SimMetrics::ap_attempts},
      {"batches", &SimMetrics::batches},
      {"sensors", &SimMetrics::sensors},
      {"mdcs", &SimMetrics::mdcs},
      {"aps", &SimMetrics::aps},
  };
  return f;
}

struct SimReport {
  NetworkConfig config;
  std::vector<std::uint64_t> seeds;
  std::vector<SimMetrics> replications;
  std::vector<std::pair<std::string, Estimate>> pooled;

  const Estimate& get(std::string_view name) const {
    for (const auto& [n, e] : pooled)
      if (n == name) return e;
    throw Error(ErrorKind::InvalidArgument, "no metric named " + std::string(name));
  }
};

class World {
 public:
  World(const NetworkConfig& cfg, std::uint64_t seed, SimOptions opt = {})
      : cfg_(cfg),
        opt_(opt),
        seed_(seed),
        mobility_(seed, Stream::mobility),
        traffic_(seed, Stream::traffic),
        fading_(seed, Stream::fading),
        aggregation_(seed, Stream::aggregation),
        mdc_grid_(cfg.arena_side, cfg.boundary, cfg.contact_radius),
        sensor_grid_(cfg.arena_side, cfg.boundary, cfg.contact_radius),
        ap_grid_(cfg.arena_side, cfg.boundary, std::max(cfg.arena_side / 32.0, cfg.aggregation_radius)),
        tx_grid_(cfg.arena_side, cfg.boundary, std::max(opt.fading_radius / 2.0, cfg.contact_radius)) {
    const double side = cfg.arena_side;
    auto s = sample_ppp(cfg.sensor_density, side, derive_seed(seed, std::uint64_t(Stream::sensors)), cfg.boundary);
    auto m = sample_ppp(cfg.mdc_density, side, derive_seed(seed, std::uint64_t(Stream::mdcs)), cfg.boundary);
    aps_ = sample_ppp(cfg.ap_density, side, derive_seed(seed, std::uint64_t(Stream::aps)), cfg.boundary);
    sensors_.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) sensors_[i].position = s.points[i];
    mdcs_.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      mdcs_[i].position = m.points[i];
      mdcs_[i].phase = MdcPhase::pausing;
      mdcs_[i].phase_timer = cfg.pause_time;
    }
    sensor_grid_.build(s.points);
    ap_grid_.build(aps_.points);
    far_factor_ = far_field_factor();
  }

  const NetworkConfig& config() const { return cfg_; }
  const std::vector<SensorState>& sensors() const { return sensors_; }
  const std::vector<MdcState>& mdcs() const { return mdcs_; }
  const PointSet& aps() const { return aps_; }
  const std::vector<Packet>& packets() const { return packets_; }
  long slot() const { return slot_; }
  double now() const { return static_cast<double>(slot_) * cfg_.slot; }

  std::uint64_t enqueued() const { return enqueued_; }
  std::uint64_t delivered_total() const { return delivered_total_; }
  std::uint64_t in_sensor_queues() const {
    std::uint64_t n = 0;
    for (const auto& s : sensors_) n += s.queue.size();
    return n;
  }
  std::uint64_t in_mdc_buffers() const {
    std::uint64_t n = 0;
    for (const auto& m : mdcs_) n += m.buffer_count();
    return n;
  }
  bool conserved() const { return enqueued_ == in_sensor_queues() + in_mdc_buffers() + delivered_total_; }

  // Number of sensor transmissions and successes in the most recent slot.
  std::size_t last_sensor_attempts() const { return last_attempts_; }
  std::size_t last_sensor_successes() const { return last_successes_; }
  const std::vector<std::size_t>& last_transmitting_sensors() const { return active_; }

  // Starts measurement at the current time.
  void begin_measurement() {
    measuring_ = true;
    measure_start_ = now();
  }

  void step() {
    const double t = now();
    const double dt = cfg_.slot;
    move_mdcs(dt);
    detect_contacts(t);
    sensor_transmissions(t);
    trigger_aggregation(t + dt);
    ap_transmissions(t);
    arrivals(t, dt);
    if (measuring_) {
      acc_.slots += 1;
      std::size_t q = 0;
      for (const auto& s : sensors_) q += s.queue.size();
      acc_.queue_sum += static_cast<double>(q);
    }
    ++slot_;
  }

  // Inject one packet at sensor i (tests).
  void inject_packet(std::size_t i) { enqueue(i, now()); }

  SimMetrics metrics() const {
    SimMetrics r;
    auto mean = [](const RunningStats& s) { return s.count() ? s.mean() : NAN; };
    r.e_ct = mean(acc_.ct);
    r.e_ict = mean(acc_.ict);
    r.e_ict_s = mean(acc_.ict_s);
    r.p_cov_m = acc_.s_attempts ? acc_.s_success / acc_.s_attempts : NAN;
    r.p_cov_a = acc_.m_attempts ? acc_.m_success / acc_.m_attempts : NAN;
    r.d_q_s = mean(acc_.d_q_s);
    r.d_t_s = mean(acc_.d_t_s);
    r.d_q_m = mean(acc_.d_q_m);
    r.d_buf_m = mean(acc_.d_buf_m);
    r.d_t_m = mean(acc_.d_t_m);
    r.total_delay = mean(acc_.total);
    r.mdc_sojourn = mean(acc_.sojourn);
    const double area = cfg_.arena_side * cfg_.arena_side;
    const double slots = acc_.slots;
    r.lambda_s_eff = slots > 0 ? acc_.s_attempts / slots / area : NAN;
    r.lambda_m_eff = slots > 0 ? acc_.m_attempts / slots / area : NAN;
    r.p_act_m = slots > 0 && !mdcs_.empty() ? acc_.m_attempts / slots / mdcs_.size() : NAN;
    // energy per packet a sensor hands to an MDC
    if (acc_.s_success > 0) {
      double sensor_slots = slots * static_cast<double>(sensors_.size());
      double joules = acc_.s_attempts * cfg_.sensor_power_mw * cfg_.slot +
                      (sensor_slots - acc_.s_attempts) * cfg_.sleep_power_mw * cfg_.slot;
      r.e_sensor = joules / acc_.s_success;
      if (acc_.m_success > 0)
        r.e_network = r.lambda_s_eff * r.e_sensor + r.lambda_m_eff * cfg_.mdc_power_mw * cfg_.slot / r.p_cov_a;
    }
    r.t_collect = mean(acc_.t_collect);
    r.t_smov = mean(acc_.t_smov);
    r.t_trans = mean(acc_.t_trans);
    r.mean_queue = slots > 0 && !sensors_.empty() ? acc_.queue_sum / slots / sensors_.size() : NAN;
    r.delivered = static_cast<double>(acc_.total.count());
    r.contacts = static_cast<double>(acc_.ct.count());
    r.sensor_attempts = acc_.s_attempts;
    r.ap_attempts = acc_.m_attempts;
    r.batches = static_cast<double>(acc_.t_trans.count());
    r.sensors = static_cast<double>(sensors_.size());
    r.mdcs = static_cast<double>(mdcs_.size());
    r.aps = static_cast<double>(aps_.size());
    return r;
  }

  // Distances from MDCs to the AP each one picked, in order of selection.
  const std::vector<double>& ap_pick_distances() const { return ap_pick_distances_; }

 private:
  struct Accumulators {
    RunningStats ct, ict, ict_s;
    RunningStats d_q_s, d_t_s, d_q_m, d_buf_m, d_t_m, total, sojourn;
    RunningStats t_collect, t_smov, t_trans;
    double s_attempts = 0, s_success = 0, m_attempts = 0, m_success = 0;
    double slots = 0, queue_sum = 0;
  };

  double far_field_factor() const {
    // Disc with the arena's area stands in for the region beyond the fading radius.
    const double a = cfg_.path_loss_exp, rc = opt_.fading_radius;
    const double rmax = cfg_.arena_side / std::sqrt(std::numbers::pi);
    if (rc >= rmax) return 0.0;
    return 2.0 * std::numbers::pi * (std::pow(rc, 2.0 - a) - std::pow(rmax, 2.0 - a)) / (a - 2.0);
  }

  double path_gain(double d) const { return std::pow(std::max(d, 1e-3), -cfg_.path_loss_exp); }

  void place(Vec2& p, Vec2& heading) {
    const double side = cfg_.arena_side;
    if (cfg_.boundary == BoundaryMode::torus) {
      p.x = wrap_coord(p.x, side);
      p.y = wrap_coord(p.y, side);
      return;
    }
    for (int k = 0; k < 4; ++k) {
      if (p.x < 0) p.x = -p.x, heading.x = -heading.x;
      if (p.x >= side) p.x = std::nextafter(2.0 * side - p.x, 0.0), heading.x = -heading.x;
      if (p.y < 0) p.y = -p.y, heading.y = -heading.y;
      if (p.y >= side) p.y = std::nextafter(2.0 * side - p.y, 0.0), heading.y = -heading.y;
    }
  }

  void move_mdcs(double dt) {
    const double step = cfg_.speed * dt;
    for (auto& m : mdcs_) {
      switch (m.phase) {
        case MdcPhase::pausing:
          m.phase_timer -= dt;
          if (m.phase_timer <= 1e-9) {
            double th = mobility_.uniform(0.0, 2.0 * std::numbers::pi);
            m.heading = {std::cos(th), std::sin(th)};
            m.phase = MdcPhase::walking;
            m.phase_timer = cfg_.walk_time;
          }
          break;
        case MdcPhase::walking:
          m.position = m.position + m.heading * step;
          place(m.position, m.heading);
          m.phase_timer -= dt;
          if (m.phase_timer <= 1e-9) {
            m.phase = MdcPhase::pausing;
            m.phase_timer = cfg_.pause_time;
          }
          break;
        case MdcPhase::moving_to_ap: {
          Vec2 d = displacement(m.position, m.stop_point, cfg_.arena_side, cfg_.boundary);
          double len = d.norm();
          if (len <= step) {
            m.position = m.stop_point;
            m.phase = MdcPhase::transmitting;
            m.tx_start = now() + dt;
            for (std::size_t i = m.sent; i < m.buffer.size(); ++i) packets_[m.buffer[i]].t_tx_start = m.tx_start;
            if (measuring_ && m.trigger_time >= measure_start_) acc_.t_smov.add(m.tx_start - m.trigger_time);
            tx_order_.push_back(static_cast<std::size_t>(&m - mdcs_.data()));
          } else {
            Vec2 h{1, 0};
            m.position = m.position + d * (step / len);
            place(m.position, h);
          }
          break;
        }
        case MdcPhase::transmitting:
          break;
      }
    }
  }

  void detect_contacts(double t) {
    mdc_grid_.clear();
    for (std::size_t j = 0; j < mdcs_.size(); ++j)
      if (mdcs_[j].collecting()) mdc_grid_.insert(j, mdcs_[j].position);
    const double rs = cfg_.contact_radius;
    for (std::size_t i = 0; i < sensors_.size(); ++i) {
      auto& s = sensors_[i];
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      mdc_grid_.for_each_within(s.position, rs, [&](std::size_t id, double d) {
        if (!mdcs_[id].collecting()) return;
        if (d < best_d || (d == best_d && static_cast<int>(id) < best)) best = static_cast<int>(id), best_d = d;
      });
      bool now_in = best >= 0;
      if (now_in && !s.in_contact) {
        // new transmission cycle: everything queued so far becomes eligible
        ++s.cycle_index;
        s.eligible = s.queue.size();
        s.contact_start = t;
        if (measuring_ && s.last_contact_end >= measure_start_) acc_.ict.add(t - s.last_contact_end);
      } else if (!now_in && s.in_contact) {
        if (measuring_ && s.contact_start >= measure_start_) acc_.ct.add(t - s.contact_start);
        s.last_contact_end = t;
      }
      s.in_contact = now_in;
      s.serving_mdc = best;
    }
    // gaps between sensor contacts as seen by collecting MDCs
    for (auto& m : mdcs_) {
      if (!m.collecting()) {
        m.sensor_contact = false;
        m.sensor_gap_start = kNoTime;
        continue;
      }
      bool any = false;
      sensor_grid_.for_each_within(m.position, rs, [&](std::size_t, double) { any = true; });
      if (any && !m.sensor_contact && m.sensor_gap_start != kNoTime && measuring_ &&
          m.sensor_gap_start >= measure_start_)
        acc_.ict_s.add(t - m.sensor_gap_start);
      if (!any && m.sensor_contact) m.sensor_gap_start = t;
      m.sensor_contact = any;
    }
  }

  double sinr_interference(Vec2 rx, std::size_t self, const std::vector<std::size_t>& ids,
                           const std::vector<Vec2>& pos, double power) {
    double near = 0.0;
    tx_grid_.for_each_within(rx, opt_.fading_radius, [&](std::size_t k, double d) {
      if (ids[k] == self) return;
      near += power * fading_.exponential(1.0) * path_gain(d);
    });
    const double area = cfg_.arena_side * cfg_.arena_side;
    double far = power * far_factor_ * static_cast<double>(pos.size()) / area;
    return near + far;
  }

  void sensor_transmissions(double t) {
    active_.clear();
    for (std::size_t i = 0; i < sensors_.size(); ++i) {
      const auto& s = sensors_[i];
      if (s.in_contact && s.eligible > 0) active_.push_back(i);
    }
    if (opt_.sensor_access == SensorAccess::one_per_mdc) {
      // keep only the nearest eligible sensor per MDC
      std::vector<std::pair<int, double>> pick(mdcs_.size(), {-1, 0.0});
      for (std::size_t i : active_) {
        const auto& s = sensors_[i];
        double d = distance(s.position, mdcs_[s.serving_mdc].position, cfg_.arena_side, cfg_.boundary);
        auto& p = pick[s.serving_mdc];
        if (p.first < 0 || d < p.second) p = {static_cast<int>(i), d};
      }
      active_.clear();
      for (const auto& p : pick)
        if (p.first >= 0) active_.push_back(static_cast<std::size_t>(p.first));
      std::sort(active_.begin(), active_.end());
    }
    last_attempts_ = active_.size();
    last_successes_ = 0;
    if (active_.empty()) return;
    tx_pos_.clear();
    for (std::size_t i : active_) tx_pos_.push_back(sensors_[i].position);
    tx_grid_.build(tx_pos_);
    std::vector<char> ok(active_.size(), 0);
    for (std::size_t k = 0; k < active_.size(); ++k) {
      const auto& s = sensors_[active_[k]];
      Vec2 rx = mdcs_[s.serving_mdc].position;
      double r0 = distance(s.position, rx, cfg_.arena_side, cfg_.boundary);
      double signal = cfg_.sensor_power_mw * fading_.exponential(1.0) * path_gain(r0);
      double interf = sinr_interference(rx, active_[k], active_, tx_pos_, cfg_.sensor_power_mw);
      ok[k] = signal > cfg_.sensor_threshold * (interf + cfg_.noise_mw);
    }
    for (std::size_t k = 0; k < active_.size(); ++k) {
      auto& s = sensors_[active_[k]];
      auto& pkt = packets_[s.queue.front()];
      if (pkt.t_first_attempt == kNoTime) pkt.t_first_attempt = t;
      ++pkt.attempts_s;
      auto& m = mdcs_[s.serving_mdc];
      bool accepted = ok[k] && m.buffer_count() < static_cast<std::size_t>(cfg_.batch_size);
      if (measuring_) {
        acc_.s_attempts += 1;
        acc_.s_success += ok[k] ? 1 : 0;
      }
      if (!accepted) continue;
      ++last_successes_;
      pkt.t_mdc = t + cfg_.slot;
      m.buffer.push_back(s.queue.front());
      s.queue.pop_front();
      --s.eligible;
    }
  }

  void trigger_aggregation(double t_end) {
    for (std::size_t j = 0; j < mdcs_.size(); ++j) {
      auto& m = mdcs_[j];
      if (!m.collecting() || m.buffer_count() < static_cast<std::size_t>(cfg_.batch_size)) continue;
      if (aps_.empty()) throw Error(ErrorKind::EmptyPointSet, "no AP in the arena");
      auto nr = ap_grid_.nearest(m.position);
      ap_pick_distances_.push_back(nr.distance);
      m.target_ap = static_cast<int>(nr.index);
      m.stop_point = stop_point_near(aps_.points[nr.index]);
      if (measuring_ && m.collect_start >= measure_start_) acc_.t_collect.add(t_end - m.collect_start);
      m.trigger_time = t_end;
      m.phase = MdcPhase::moving_to_ap;
      m.sensor_contact = false;
    }
  }

  Vec2 stop_point_near(Vec2 ap) {
    const double ra = cfg_.aggregation_radius;
    for (;;) {
      double r = ra * std::sqrt(aggregation_.uniform());
      double th = aggregation_.uniform(0.0, 2.0 * std::numbers::pi);
      Vec2 p{ap.x + r * std::cos(th), ap.y + r * std::sin(th)};
      if (cfg_.boundary == BoundaryMode::torus) {
        p.x = wrap_coord(p.x, cfg_.arena_side);
        p.y = wrap_coord(p.y, cfg_.arena_side);
        return p;
      }
      if (p.x >= 0 && p.y >= 0 && p.x < cfg_.arena_side && p.y < cfg_.arena_side) return p;
    }
  }

  void ap_transmissions(double t) {
    std::erase_if(tx_order_, [&](std::size_t j) { return mdcs_[j].phase != MdcPhase::transmitting; });
    std::vector<std::size_t> senders;
    if (opt_.ap_access == ApAccess::one_per_ap) {
      std::vector<char> busy(aps_.size(), 0);
      for (std::size_t j : tx_order_) {
        auto ap = static_cast<std::size_t>(mdcs_[j].target_ap);
        if (busy[ap]) continue;
        busy[ap] = 1;
        senders.push_back(j);
      }
      std::sort(senders.begin(), senders.end());
    } else {
      for (std::size_t j = 0; j < mdcs_.size(); ++j)
        if (mdcs_[j].phase == MdcPhase::transmitting) senders.push_back(j);
    }
    if (senders.empty()) return;
    tx_pos_.clear();
    for (std::size_t j : senders) tx_pos_.push_back(mdcs_[j].position);
    tx_grid_.build(tx_pos_);
    std::vector<char> ok(senders.size(), 0);
    for (std::size_t k = 0; k < senders.size(); ++k) {
      const auto& m = mdcs_[senders[k]];
      Vec2 rx = aps_.points[static_cast<std::size_t>(m.target_ap)];
      double r0 = distance(m.position, rx, cfg_.arena_side, cfg_.boundary);
      double signal = cfg_.mdc_power_mw * fading_.exponential(1.0) * path_gain(r0);
      double interf = sinr_interference(rx, senders[k], senders, tx_pos_, cfg_.mdc_power_mw);
      ok[k] = signal > cfg_.ap_threshold * (interf + cfg_.noise_mw);
    }
    for (std::size_t k = 0; k < senders.size(); ++k) {
      auto& m = mdcs_[senders[k]];
      auto id = m.buffer[m.sent];
      auto& pkt = packets_[id];
      ++pkt.attempts_m;
      if (measuring_) {
        acc_.m_attempts += 1;
        acc_.m_success += ok[k] ? 1 : 0;
      }
      if (!ok[k]) continue;
      deliver(id, t + cfg_.slot);
      ++m.sent;
      if (m.sent == m.buffer.size()) {
        if (measuring_ && m.tx_start >= measure_start_) acc_.t_trans.add(t + cfg_.slot - m.tx_start);
        m.buffer.clear();
        m.sent = 0;
        m.phase = MdcPhase::pausing;
        m.phase_timer = cfg_.pause_time;
        m.target_ap = -1;
        m.collect_start = t + cfg_.slot;
        m.sensor_gap_start = kNoTime;
      }
    }
  }

  void deliver(std::uint32_t id, double t_ap) {
    ++delivered_total_;
    const auto& p = packets_[id];
    if (!measuring_ || p.t_arrival < measure_start_) return;
    const double dt = cfg_.slot;
    acc_.d_t_s.add(p.attempts_s * dt);
    acc_.d_q_s.add(p.t_mdc - p.t_arrival - p.attempts_s * dt);
    acc_.d_q_m.add(p.t_tx_start - p.t_mdc);
    acc_.d_buf_m.add(t_ap - p.t_tx_start - p.attempts_m * dt);
    acc_.d_t_m.add(p.attempts_m * dt);
    acc_.total.add(t_ap - p.t_arrival);
    acc_.sojourn.add(t_ap - p.t_mdc);
  }

  void enqueue(std::size_t i, double t_arr) {
    Packet p;
    p.t_arrival = t_arr;
    p.sensor = static_cast<std::uint32_t>(i);
    p.cycle = sensors_[i].cycle_index;
    packets_.push_back(p);
    sensors_[i].queue.push_back(static_cast<std::uint32_t>(packets_.size() - 1));
    ++enqueued_;
  }

  void arrivals(double t, double dt) {
    if (sensors_.empty()) return;
    long n = traffic_.poisson(cfg_.arrival_rate * dt * static_cast<double>(sensors_.size()));
    arrival_buf_.clear();
    for (long k = 0; k < n; ++k) {
      auto i = static_cast<std::size_t>(traffic_.uniform() * static_cast<double>(sensors_.size()));
      i = std::min(i, sensors_.size() - 1);
      arrival_buf_.push_back({t + dt * traffic_.uniform(), i});
    }
    std::sort(arrival_buf_.begin(), arrival_buf_.end());
    for (const auto& [ta, i] : arrival_buf_) enqueue(i, ta);
  }

  NetworkConfig cfg_;
  SimOptions opt_;
  std::uint64_t seed_;
  Rng mobility_, traffic_, fading_, aggregation_;
  std::vector<SensorState> sensors_;
  std::vector<MdcState> mdcs_;
  PointSet aps_;
  std::vector<Packet> packets_;
  SpatialGrid mdc_grid_, sensor_grid_, ap_grid_, tx_grid_;
  std::vector<std::size_t> active_;
  std::vector<Vec2> tx_pos_;
  std::vector<std::size_t> tx_order_;
  std::vector<std::pair<double, std::size_t>> arrival_buf_;
  std::vector<double> ap_pick_distances_;
  double far_factor_ = 0;
  long slot_ = 0;
  bool measuring_ = false;
  double measure_start_ = 0;
  std::uint64_t enqueued_ = 0, delivered_total_ = 0;
  std::size_t last_attempts_ = 0, last_successes_ = 0;
  Accumulators acc_;
};

inline World deploy(const NetworkConfig& cfg, std::uint64_t seed, SimOptions opt = {}) {
  return World(cfg, seed, opt);
}

inline SimMetrics run_once(const NetworkConfig& cfg, std::uint64_t seed, long horizon_slots,
                           long warmup_slots, SimOptions opt = {}) {
  if (!(horizon_slots > warmup_slots) || warmup_slots < 0)
    throw Error(ErrorKind::InvalidArgument, "horizon must exceed warm-up");
  World w(cfg, seed, opt);
  for (long n = 0; n < horizon_slots; ++n) {
    if (n == warmup_slots) w.begin_measurement();
    w.step();
  }
  auto m = w.metrics();
  if (m.delivered <= 0) {
    std::ostringstream msg;
    msg << "no packet delivered after warm-up (seed " << seed << ", sensors " << m.sensors
        << ", mdcs " << m.mdcs << ", aps " << m.aps << ", contacts " << m.contacts << ")";
    throw Error(ErrorKind::NoDeliveries, msg.str());
  }
  return m;
}

inline std::vector<std::pair<std::string, Estimate>> pool_metrics(const std::vector<SimMetrics>& reps) {
  std::vector<std::pair<std::string, Estimate>> out;
  for (const auto& f : sim_metric_fields()) {
    std::vector<double> xs;
    for (const auto& r : reps) xs.push_back(r.*(f.member));
    out.emplace_back(std::string(f.name), estimate_from_replicates(xs));
  }
  return out;
}

// Runs each seed independently (in parallel when cores allow) and pools in seed order.
inline SimReport replicate(const NetworkConfig& cfg, const std::vector<std::uint64_t>& seeds,
                           long horizon_slots, long warmup_slots, SimOptions opt = {},
                           unsigned workers = 0) {
  if (seeds.size() < 2) throw Error(ErrorKind::InvalidArgument, "replicate needs at least two seeds");
  SimReport rep;
  rep.config = cfg;
  rep.seeds = seeds;
  rep.replications.resize(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(seeds.size()));
  auto job = [&](std::size_t i) {
    try {
      rep.replications[i] = run_once(cfg, seeds[i], horizon_slots, warmup_slots, opt);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (workers <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) job(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < seeds.size(); i += workers) job(i);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  rep.pooled = pool_metrics(rep.replications);
  return rep;
}

}  // namespace mdcnet
