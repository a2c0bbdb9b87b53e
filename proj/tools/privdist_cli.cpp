// privdist command-line tool: key generation, an in-process demo of the
// three-party protocol, networked party roles over TCP, and a cost bench.
// Talks to the library exclusively through the public C API.

#include <arpa/inet.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "privdist.h"

namespace {

[[noreturn]] void die(const std::string& msg, int code = 1) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  std::exit(code);
}

void check(privdist_status st, const std::string& what, int code = 1) {
  if (st != PRIVDIST_OK)
    die(what + ": " + privdist_status_str(st), code);
}

// ---- small RAII wrappers over the C handles ----

struct Group {
  privdist_group* h = nullptr;
  ~Group() { privdist_group_free(h); }
};
struct EncKey {
  privdist_enc_key* h = nullptr;
  ~EncKey() { privdist_enc_key_free(h); }
};
struct SigKey {
  privdist_sig_key* h = nullptr;
  ~SigKey() { privdist_sig_key_free(h); }
};
struct Config {
  privdist_config* h = nullptr;
  ~Config() { privdist_config_free(h); }
};
struct Party {
  privdist_party* h = nullptr;
  ~Party() { privdist_party_free(h); }
};

privdist_rng* make_rng(std::optional<uint64_t> seed, uint64_t lane) {
  privdist_rng* rng = nullptr;
  if (seed)
    check(privdist_rng_new_seeded(*seed + lane, &rng), "rng");
  else
    check(privdist_rng_new(&rng), "rng");
  return rng;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) die("cannot write " + path);
  out << text;
  if (!out.flush()) die("cannot write " + path);
}

std::pair<double, double> parse_lat_lon(const std::string& s) {
  size_t comma = s.find(',');
  if (comma == std::string::npos) die("expected LAT,LON but got '" + s + "'");
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    die("cannot parse coordinates '" + s + "'");
  }
}

std::vector<uint8_t> random_session_id() {
  std::random_device dev;
  std::vector<uint8_t> id(16);
  for (auto& b : id) b = static_cast<uint8_t>(dev());
  return id;
}

// ---- in-process frame shuttle ----

struct Shuttle {
  privdist_party* party[3] = {nullptr, nullptr, nullptr};  // P1, P2, C
  size_t transmissions = 0;

  static constexpr const char* names[3] = {"p1", "p2", "c"};

  void deliver_to(int idx, const std::vector<uint8_t>& frame) {
    privdist_status st = privdist_party_deliver(party[idx], frame.data(), frame.size());
    if (st != PRIVDIST_OK)
      die(std::string(names[idx]) + " aborted: " + privdist_status_str(st) + " (" +
              privdist_party_last_error(party[idx]) + ")",
          2);
  }

  void pump() {
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (int idx = 0; idx < 3; ++idx) {
        while (privdist_party_outbox_size(party[idx]) > 0) {
          std::vector<uint8_t> frame(privdist_party_outbox_front_len(party[idx]));
          size_t len = 0;
          uint8_t mask = 0;
          check(privdist_party_outbox_pop(party[idx], frame.data(), frame.size(), &len, &mask),
                "outbox");
          ++transmissions;
          if (mask & PRIVDIST_DEST_P1) deliver_to(0, frame);
          if (mask & PRIVDIST_DEST_P2) deliver_to(1, frame);
          if (mask & PRIVDIST_DEST_C) deliver_to(2, frame);
          progressed = true;
        }
      }
    }
  }
};

struct SessionEnv {
  Group group;
  EncKey c_key;
  SigKey p1_key, p2_key;
  Config cfg;
};

void build_env(SessionEnv& env, const std::string& group_name, uint64_t scale,
               uint32_t n, double radius, std::optional<uint64_t> seed,
               const std::vector<uint8_t>& session) {
  check(privdist_group_load(group_name.c_str(), &env.group.h), "group " + group_name);
  privdist_rng* krng = make_rng(seed, 100);
  check(privdist_enc_keygen(env.group.h, krng, &env.c_key.h), "enc keygen");
  check(privdist_sig_keygen(env.group.h, krng, &env.p1_key.h), "sig keygen");
  check(privdist_sig_keygen(env.group.h, krng, &env.p2_key.h), "sig keygen");
  privdist_rng_free(krng);
  check(privdist_config_new(env.group.h, env.c_key.h, env.p1_key.h, env.p2_key.h, scale,
                            n, radius, session.data(), session.size(), &env.cfg.h),
        "config");
}

struct RunStats {
  double d_p1 = 0, d_p2 = 0;
  size_t transmissions = 0;
  double wall_s = 0;
};

RunStats run_inprocess(const SessionEnv& env, double lat1, double lon1, double lat2,
                       double lon2, std::optional<uint64_t> seed, Shuttle& shuttle,
                       Party& p1, Party& p2, Party& c) {
  check(privdist_party_new_p1(env.cfg.h, lat1, lon1, env.p1_key.h, make_rng(seed, 1), &p1.h),
        "party p1");
  check(privdist_party_new_p2(env.cfg.h, lat2, lon2, env.p2_key.h, make_rng(seed, 2), &p2.h),
        "party p2");
  check(privdist_party_new_c(env.cfg.h, env.c_key.h, &c.h), "party c");

  shuttle.party[0] = p1.h;
  shuttle.party[1] = p2.h;
  shuttle.party[2] = c.h;

  auto t0 = std::chrono::steady_clock::now();
  check(privdist_party_start(p2.h), "p2 start");
  shuttle.pump();
  auto t1 = std::chrono::steady_clock::now();

  if (!privdist_party_finished(p1.h) || !privdist_party_finished(p2.h))
    die("session ended without a result", 2);

  RunStats out;
  check(privdist_party_distance_km(p1.h, &out.d_p1), "p1 result");
  check(privdist_party_distance_km(p2.h, &out.d_p2), "p2 result");
  out.transmissions = shuttle.transmissions;
  out.wall_s = std::chrono::duration<double>(t1 - t0).count();
  return out;
}

void print_costs(const char* label, privdist_party* p, bool is_c) {
  if (is_c) {
    std::printf("%s exponentiations: %llu = decrypt %llu + verify %llu\n", label,
                (unsigned long long)privdist_party_exp_count(p),
                (unsigned long long)privdist_party_cost(p, PRIVDIST_COST_DECRYPT),
                (unsigned long long)privdist_party_cost(p, PRIVDIST_COST_VERIFY));
  } else {
    std::printf("%s exponentiations: %llu = ciphertexts %llu + masks %llu + signature %llu\n",
                label, (unsigned long long)privdist_party_exp_count(p),
                (unsigned long long)privdist_party_cost(p, PRIVDIST_COST_CIPHERTEXTS),
                (unsigned long long)privdist_party_cost(p, PRIVDIST_COST_MASKS),
                (unsigned long long)privdist_party_cost(p, PRIVDIST_COST_SIGNATURE));
  }
}

// ---- subcommand: keygen ----

int cmd_keygen(const std::string& out_dir, const std::string& group_name,
               std::optional<uint64_t> seed) {
  Group group;
  check(privdist_group_load(group_name.c_str(), &group.h), "group " + group_name);

  privdist_rng* rng = make_rng(seed, 0);
  EncKey c_key;
  SigKey p1_key, p2_key;
  check(privdist_enc_keygen(group.h, rng, &c_key.h), "enc keygen");
  check(privdist_sig_keygen(group.h, rng, &p1_key.h), "sig keygen");
  check(privdist_sig_keygen(group.h, rng, &p2_key.h), "sig keygen");
  privdist_rng_free(rng);

  auto dump = [&](const char* file, char* text) {
    write_file(out_dir + "/" + file, text);
    privdist_text_free(text);
    std::printf("wrote %s/%s\n", out_dir.c_str(), file);
  };
  char* text = nullptr;
  check(privdist_enc_key_export(c_key.h, 1, &text), "export");
  dump("c_enc.sk", text);
  check(privdist_enc_key_export(c_key.h, 0, &text), "export");
  dump("c_enc.pk", text);
  check(privdist_sig_key_export(p1_key.h, 1, &text), "export");
  dump("p1_sig.sk", text);
  check(privdist_sig_key_export(p1_key.h, 0, &text), "export");
  dump("p1_sig.pk", text);
  check(privdist_sig_key_export(p2_key.h, 1, &text), "export");
  dump("p2_sig.sk", text);
  check(privdist_sig_key_export(p2_key.h, 0, &text), "export");
  dump("p2_sig.pk", text);
  return 0;
}

// ---- subcommand: demo ----

int cmd_demo(const std::string& p1_coords, const std::string& p2_coords, uint32_t n,
             uint64_t scale, const std::string& group_name, double radius,
             std::optional<uint64_t> seed) {
  auto [lat1, lon1] = parse_lat_lon(p1_coords);
  auto [lat2, lon2] = parse_lat_lon(p2_coords);

  SessionEnv env;
  build_env(env, group_name, scale, n, radius, seed, random_session_id());

  Shuttle shuttle;
  Party p1, p2, c;
  RunStats stats = run_inprocess(env, lat1, lon1, lat2, lon2, seed, shuttle, p1, p2, c);

  double oracle = 0;
  check(privdist_haversine_km(lat1, lon1, lat2, lon2, radius, &oracle), "oracle");

  std::printf("group             : %s (%u bits)\n", group_name.c_str(),
              privdist_group_bits(env.group.h));
  std::printf("N                 : %u\n", n);
  std::printf("scale F           : %llu\n", (unsigned long long)scale);
  std::printf("protocol distance : %.9f km  (P1)\n", stats.d_p1);
  std::printf("                    %.9f km  (P2)\n", stats.d_p2);
  std::printf("oracle distance   : %.9f km\n", oracle);
  std::printf("delta             : %.3e km\n", std::fabs(stats.d_p1 - oracle));
  std::printf("messages          : %zu\n", stats.transmissions);
  print_costs("P1", p1.h, false);
  print_costs("P2", p2.h, false);
  print_costs("C ", c.h, true);

  privdist_rng* brng = make_rng(seed, 7);
  double ms = 0;
  check(privdist_bench_exp_ms(env.group.h, brng, 16, &ms), "bench");
  privdist_rng_free(brng);
  std::printf("per-exponentiation: %.4f ms (16 reps)\n", ms);
  std::printf("session wall time : %.3f s\n", stats.wall_s);

  char* audit = nullptr;
  check(privdist_party_audit(c.h, &audit), "audit");
  std::printf("c audit           : %s\n", audit);
  privdist_text_free(audit);

  if (stats.transmissions != 5) die("expected exactly 5 message transmissions", 2);
  if (stats.d_p1 != stats.d_p2) die("parties disagree on the distance", 2);
  return 0;
}

// ---- subcommand: bench ----

int cmd_bench(const std::string& n_list, const std::string& group_name,
              std::optional<uint64_t> seed) {
  std::vector<uint32_t> ns;
  std::stringstream ss(n_list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    ns.push_back(static_cast<uint32_t>(std::stoul(item)));
  }
  if (ns.empty()) die("no N values given");

  Group probe;
  check(privdist_group_load(group_name.c_str(), &probe.h), "group " + group_name);
  privdist_rng* brng = make_rng(seed, 7);
  double exp_ms = 0;
  check(privdist_bench_exp_ms(probe.h, brng, 16, &exp_ms), "bench");
  privdist_rng_free(brng);

  std::printf("group %s (%u bits), per-exponentiation %.4f ms\n", group_name.c_str(),
              privdist_group_bits(probe.h), exp_ms);
  std::printf("%6s %10s %10s %10s %12s %14s\n", "N", "P1 exps", "P2 exps", "C exps",
              "session s", "projected s");

  for (uint32_t n : ns) {
    if (n < 4) die("bench requires N >= 4");
    SessionEnv env;
    build_env(env, group_name, 1000000000000ULL, n, 6371.0, seed, random_session_id());
    Shuttle shuttle;
    Party p1, p2, c;
    RunStats stats =
        run_inprocess(env, 41.3851, 2.1734, 41.1189, 1.2445, seed, shuttle, p1, p2, c);

    uint64_t p1_exps = privdist_party_exp_count(p1.h);
    uint64_t p2_exps = privdist_party_exp_count(p2.h);
    uint64_t c_exps = privdist_party_exp_count(c.h);
    uint64_t expected = 8 + 2ull * (n - 3) + 1;
    if (p1_exps != expected || p2_exps != expected)
      die("cost model mismatch: expected 8 + 2(N-3) + 1 = " + std::to_string(expected));
    if (privdist_party_cost(c.h, PRIVDIST_COST_DECRYPT) != n)
      die("cost model mismatch: C must decrypt exactly N ciphertexts");

    double projected = (double)(p1_exps + p2_exps + c_exps) * exp_ms / 1000.0;
    std::printf("%6u %10llu %10llu %10llu %12.3f %14.3f\n", n,
                (unsigned long long)p1_exps, (unsigned long long)p2_exps,
                (unsigned long long)c_exps, stats.wall_s, projected);
  }
  return 0;
}

// ---- subcommand: party (TCP) ----

struct FlatConfig {
  std::map<std::string, std::string> kv;

  std::string get(const std::string& key, const std::string& fallback = "") const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  }
  std::string require(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) die("config is missing '" + key + "'");
    return it->second;
  }
};

FlatConfig parse_flat_config(const std::string& path) {
  FlatConfig cfg;
  std::ifstream in(path);
  if (!in) die("cannot read config " + path);
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r");
      size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) cfg.kv[key] = value;
  }
  return cfg;
}

std::string key_path(const FlatConfig& cfg, const std::string& key, const char* env_var) {
  if (const char* env = std::getenv(env_var); env && *env) return env;
  return cfg.require(key);
}

int tcp_listen(uint16_t port) {
  int fd = socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) die("socket: " + std::string(strerror(errno)), 3);
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(port);
  if (bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
    die("bind port " + std::to_string(port) + ": " + strerror(errno), 3);
  if (listen(fd, 4) != 0) die("listen: " + std::string(strerror(errno)), 3);
  return fd;
}

int tcp_accept(int listen_fd) {
  int fd = accept(listen_fd, nullptr, nullptr);
  if (fd < 0) die("accept: " + std::string(strerror(errno)), 3);
  return fd;
}

int tcp_connect(const std::string& host, uint16_t port, int attempts = 40) {
  for (int i = 0; i < attempts; ++i) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) == 0) {
      int fd = socket(res->ai_family, res->ai_socktype, res->ai_protocol);
      if (fd >= 0 && connect(fd, res->ai_addr, res->ai_addrlen) == 0) {
        freeaddrinfo(res);
        return fd;
      }
      if (fd >= 0) close(fd);
      freeaddrinfo(res);
    }
    usleep(250 * 1000);
  }
  die("cannot connect to " + host + ":" + std::to_string(port), 3);
}

void send_all(int fd, const uint8_t* data, size_t len) {
  while (len > 0) {
    ssize_t n = send(fd, data, len, MSG_NOSIGNAL);
    if (n <= 0) die("send: " + std::string(strerror(errno)), 3);
    data += n;
    len -= static_cast<size_t>(n);
  }
}

bool recv_exact(int fd, uint8_t* data, size_t len) {
  while (len > 0) {
    ssize_t n = recv(fd, data, len, 0);
    if (n == 0) return false;  // peer closed
    if (n < 0) die("recv: " + std::string(strerror(errno)), 3);
    data += n;
    len -= static_cast<size_t>(n);
  }
  return true;
}

// Reads one length-prefixed frame; returns the whole frame including the
// prefix, or nullopt on orderly close before the first byte.
std::optional<std::vector<uint8_t>> recv_frame(int fd) {
  uint8_t head[4];
  if (!recv_exact(fd, head, 4)) return std::nullopt;
  uint32_t len = (uint32_t(head[0]) << 24) | (uint32_t(head[1]) << 16) |
                 (uint32_t(head[2]) << 8) | uint32_t(head[3]);
  if (len > 16u * 1024 * 1024) die("oversize frame from peer", 2);
  std::vector<uint8_t> frame(4 + len);
  std::memcpy(frame.data(), head, 4);
  if (!recv_exact(fd, frame.data() + 4, len)) die("peer closed mid-frame", 3);
  return frame;
}

void deliver_or_die(privdist_party* party, const char* role,
                    const std::vector<uint8_t>& frame) {
  privdist_status st = privdist_party_deliver(party, frame.data(), frame.size());
  if (st != PRIVDIST_OK)
    die(std::string(role) + " abort: " + privdist_status_str(st) + " (" +
            privdist_party_last_error(party) + ")",
        2);
}

// Sends queued outbound frames over the per-destination sockets. fds indexed
// by destination role; a broadcast frame goes to every connected destination.
void flush_outbox(privdist_party* party, const int fds[3]) {
  while (privdist_party_outbox_size(party) > 0) {
    std::vector<uint8_t> frame(privdist_party_outbox_front_len(party));
    size_t len = 0;
    uint8_t mask = 0;
    check(privdist_party_outbox_pop(party, frame.data(), frame.size(), &len, &mask),
          "outbox", 3);
    const uint8_t bits[3] = {PRIVDIST_DEST_P1, PRIVDIST_DEST_P2, PRIVDIST_DEST_C};
    for (int i = 0; i < 3; ++i)
      if ((mask & bits[i]) && fds[i] >= 0) send_all(fds[i], frame.data(), frame.size());
  }
}

int cmd_party(const std::string& role, const std::string& config_path) {
  FlatConfig fc = parse_flat_config(config_path);

  std::string group_name = fc.get("group", "modp-2048");
  Group group;
  check(privdist_group_load(group_name.c_str(), &group.h), "group " + group_name);

  uint64_t scale = std::stoull(fc.get("scale", "1000000000000"));
  uint32_t n = static_cast<uint32_t>(std::stoul(fc.get("n", "20")));
  double radius = std::stod(fc.get("radius_km", "6371.0"));
  std::string session = fc.get("session", "privdist-session");
  std::vector<uint8_t> session_id(session.begin(), session.end());
  std::optional<uint64_t> seed;
  if (!fc.get("seed").empty()) seed = std::stoull(fc.get("seed"));

  EncKey c_pub;
  check(privdist_enc_key_import(
            read_file(key_path(fc, "c_enc_public_key", "PRIVDIST_C_ENC_PUBLIC_KEY")).c_str(),
            group.h, &c_pub.h),
        "c encryption public key");
  SigKey p1_pub, p2_pub;
  check(privdist_sig_key_import(
            read_file(key_path(fc, "p1_sig_public_key", "PRIVDIST_P1_SIG_PUBLIC_KEY")).c_str(),
            group.h, &p1_pub.h),
        "p1 signing public key");
  check(privdist_sig_key_import(
            read_file(key_path(fc, "p2_sig_public_key", "PRIVDIST_P2_SIG_PUBLIC_KEY")).c_str(),
            group.h, &p2_pub.h),
        "p2 signing public key");

  Config cfg;
  check(privdist_config_new(group.h, c_pub.h, p1_pub.h, p2_pub.h, scale, n, radius,
                            session_id.data(), session_id.size(), &cfg.h),
        "config");

  uint16_t c_port = static_cast<uint16_t>(std::stoul(fc.require("c_port")));
  uint16_t p1_port = static_cast<uint16_t>(std::stoul(fc.require("p1_port")));
  std::string c_host = fc.get("c_host", "127.0.0.1");
  std::string p1_host = fc.get("p1_host", "127.0.0.1");

  int fds[3] = {-1, -1, -1};  // indexed by destination: P1, P2, C

  if (role == "c") {
    EncKey c_sec;
    check(privdist_enc_key_import(
              read_file(key_path(fc, "c_enc_secret_key", "PRIVDIST_C_ENC_SECRET_KEY")).c_str(),
              group.h, &c_sec.h),
          "c encryption secret key");
    Party me;
    check(privdist_party_new_c(cfg.h, c_sec.h, &me.h), "party c");

    int lfd = tcp_listen(c_port);
    int conn_a = tcp_accept(lfd);
    int conn_b = tcp_accept(lfd);
    close(lfd);
    // Identities are unknown until the first frame, but only M5 ever leaves C
    // and it is a broadcast, so both connections receive every outbound frame.
    int out_fds[3] = {conn_a, conn_b, -1};

    size_t frames_seen = 0;
    pollfd pfds[2] = {{conn_a, POLLIN, 0}, {conn_b, POLLIN, 0}};
    while (!privdist_party_finished(me.h)) {
      if (poll(pfds, 2, 30000) <= 0) die("timed out waiting for the parties", 3);
      for (pollfd& p : pfds) {
        if (!(p.revents & (POLLIN | POLLHUP))) continue;
        auto frame = recv_frame(p.fd);
        if (!frame) die("peer closed before the session finished", 3);
        ++frames_seen;
        deliver_or_die(me.h, "c", *frame);
        flush_outbox(me.h, out_fds);
        p.revents = 0;
      }
    }
    char* audit = nullptr;
    check(privdist_party_audit(me.h, &audit), "audit");
    std::printf("%s frames_in=%zu\n", audit, frames_seen);
    privdist_text_free(audit);
    close(conn_a);
    close(conn_b);
    return 0;
  }

  double lat = std::stod(fc.require("lat"));
  double lon = std::stod(fc.require("lon"));

  if (role == "p1") {
    SigKey p1_sec;
    check(privdist_sig_key_import(
              read_file(key_path(fc, "p1_sig_secret_key", "PRIVDIST_P1_SIG_SECRET_KEY")).c_str(),
              group.h, &p1_sec.h),
          "p1 signing secret key");
    Party me;
    check(privdist_party_new_p1(cfg.h, lat, lon, p1_sec.h, make_rng(seed, 1), &me.h),
          "party p1");

    int lfd = tcp_listen(p1_port);
    int p2_fd = tcp_accept(lfd);
    close(lfd);
    int c_fd = tcp_connect(c_host, c_port);
    fds[1] = p2_fd;
    fds[2] = c_fd;

    auto m1 = recv_frame(p2_fd);
    if (!m1) die("p2 closed before sending its ciphertexts", 3);
    deliver_or_die(me.h, "p1", *m1);
    flush_outbox(me.h, fds);

    auto m5 = recv_frame(c_fd);
    if (!m5) die("c closed before broadcasting the result", 3);
    deliver_or_die(me.h, "p1", *m5);

    double d = 0;
    check(privdist_party_distance_km(me.h, &d), "result", 2);
    std::printf("distance_km=%.9f\n", d);
    close(p2_fd);
    close(c_fd);
    return 0;
  }

  if (role == "p2") {
    SigKey p2_sec;
    check(privdist_sig_key_import(
              read_file(key_path(fc, "p2_sig_secret_key", "PRIVDIST_P2_SIG_SECRET_KEY")).c_str(),
              group.h, &p2_sec.h),
          "p2 signing secret key");
    Party me;
    check(privdist_party_new_p2(cfg.h, lat, lon, p2_sec.h, make_rng(seed, 2), &me.h),
          "party p2");

    int p1_fd = tcp_connect(p1_host, p1_port);
    int c_fd = tcp_connect(c_host, c_port);
    fds[0] = p1_fd;
    fds[2] = c_fd;

    check(privdist_party_start(me.h), "p2 start", 2);
    flush_outbox(me.h, fds);  // M1

    auto m2 = recv_frame(p1_fd);
    if (!m2) die("p1 closed before sending the permuted list", 3);
    deliver_or_die(me.h, "p2", *m2);
    flush_outbox(me.h, fds);  // M4

    auto m5 = recv_frame(c_fd);
    if (!m5) die("c closed before broadcasting the result", 3);
    deliver_or_die(me.h, "p2", *m5);

    double d = 0;
    check(privdist_party_distance_km(me.h, &d), "result", 2);
    std::printf("distance_km=%.9f\n", d);
    close(p1_fd);
    close(c_fd);
    return 0;
  }

  die("role must be p1, p2 or c");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"privacy-preserving Haversine distance (ElGamal three-party protocol)"};
  app.require_subcommand(1);

  // keygen
  auto* keygen = app.add_subcommand("keygen", "generate key files for C, P1 and P2");
  std::string out_dir;
  std::string group_name = "modp-2048";
  std::optional<uint64_t> seed;
  keygen->add_option("--out", out_dir, "output directory")->required();
  keygen->add_option("--group", group_name, "group name");
  keygen->add_option("--seed", seed, "deterministic seed (tests only)");

  // demo
  auto* demo = app.add_subcommand("demo", "run all three parties in-process");
  std::string p1_coords, p2_coords;
  uint32_t n = 20;
  uint64_t scale = 1000000000000ULL;
  double radius = 6371.0;
  demo->add_option("--p1", p1_coords, "P1 coordinates LAT,LON in degrees")->required();
  demo->add_option("--p2", p2_coords, "P2 coordinates LAT,LON in degrees")->required();
  demo->add_option("--n", n, "total ciphertext count N (>= 4)");
  demo->add_option("--scale", scale, "fixed-point scale F (even)");
  demo->add_option("--group", group_name, "group name");
  demo->add_option("--radius", radius, "sphere radius in km");
  demo->add_option("--seed", seed, "deterministic seed (tests only)");

  // party
  auto* party = app.add_subcommand("party", "run one role over TCP");
  std::string role, config_path;
  party->add_option("--role", role, "p1 | p2 | c")->required();
  party->add_option("--config", config_path, "flat key-value config file")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "exponentiation counts and timings by N");
  std::string n_list = "10,50,100,200";
  bench->add_option("--n", n_list, "comma-separated N values");
  bench->add_option("--group", group_name, "group name");
  bench->add_option("--seed", seed, "deterministic seed (tests only)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen) return cmd_keygen(out_dir, group_name, seed);
    if (*demo) return cmd_demo(p1_coords, p2_coords, n, scale, group_name, radius, seed);
    if (*party) return cmd_party(role, config_path);
    if (*bench) return cmd_bench(n_list, group_name, seed);
  } catch (const std::exception& e) {
    die(e.what());
  }
  return 1;
}
