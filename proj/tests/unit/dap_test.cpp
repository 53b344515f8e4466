#include <gtest/gtest.h>

#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "support/env.hpp"
#include "verdap/dap/protocol.hpp"
#include "verdap/dap/server.hpp"
#include "verdap/dap/session.hpp"

namespace verdap {
namespace {

using dap::json;
using testing::data_path;

/// In-process session that numbers requests and keeps every message.
class Harness {
public:
  std::vector<json> send(const std::string& command, json args = json::object()) {
    json req = {{"seq", seq_++}, {"type", "request"}, {"command", command}, {"arguments", std::move(args)}};
    std::vector<json> out = session.handle(req);
    log.push_back(req);
    log.insert(log.end(), out.begin(), out.end());
    return out;
  }

  json response(const std::string& command, json args = json::object()) {
    for (auto& m : send(command, std::move(args))) {
      if (m["type"] == "response") return m;
    }
    ADD_FAILURE() << "no response to " << command;
    return {};
  }

  std::vector<json> launch(const std::string& program, json extra = json::object()) {
    json args = {{"program", program}, {"bruteforceBound", 8}};
    args.update(extra);
    send("initialize", {{"adapterID", "verdap"}});
    return send("launch", args);
  }

  /// Thread names in registry order.
  std::vector<std::string> names() {
    std::vector<std::string> out;
    json threads = response("threads")["body"]["threads"];
    for (const auto& t : threads) out.push_back(t["name"]);
    return out;
  }

  int id_of(const std::string& name) {
    json threads = response("threads")["body"]["threads"];
    for (const auto& t : threads) {
      if (t["name"] == name) return t["id"];
    }
    ADD_FAILURE() << "no thread " << name;
    return -1;
  }

  dap::DebugSession session;
  std::vector<json> log;

private:
  int seq_ = 1;
};

std::string temp_program(const std::string& name, const std::string& source) {
  std::string path = ::testing::TempDir() + name;
  testing::write_text(path, source);
  return path;
}

std::vector<json> filter(const std::vector<json>& msgs, const std::string& event) {
  std::vector<json> out;
  for (const auto& m : msgs) {
    if (m["type"] == "event" && m["event"] == event) out.push_back(m);
  }
  return out;
}

TEST(Framing, EncodeDecodeRoundTrip) {
  json msg = {{"seq", 1}, {"type", "event"}, {"event", "output"}, {"body", {{"output", "x₀ ≤ 0"}}}};
  std::string frame = dap::frame_encode(msg);
  std::string body = msg.dump();
  EXPECT_EQ(frame, "Content-Length: " + std::to_string(body.size()) + "\r\n\r\n" + body);
  auto decoded = dap::frame_decode(frame + "Content-Length: 2");
  ASSERT_TRUE(decoded);
  EXPECT_EQ(decoded->message, msg);
  EXPECT_EQ(decoded->consumed, frame.size());
  EXPECT_FALSE(dap::frame_decode(frame.substr(0, frame.size() - 1)));
  EXPECT_FALSE(dap::frame_decode("Content-Len"));
}

TEST(Framing, GarbledHeaderIsAnError) {
  EXPECT_THROW(dap::frame_decode("Content-Length: abc\r\n\r\n{}"), dap::FramingError);
  std::istringstream in("Content-Length: abc\r\n\r\n{}");
  dap::FrameReader reader(in);
  EXPECT_THROW(reader.next(), dap::FramingError);
}

TEST(Framing, ReaderYieldsBodiesThenEnd) {
  std::istringstream in(dap::frame_encode(json{{"a", 1}}) + dap::frame_encode(json{{"b", 2}}));
  dap::FrameReader reader(in);
  EXPECT_EQ(json::parse(*reader.next()), (json{{"a", 1}}));
  EXPECT_EQ(json::parse(*reader.next()), (json{{"b", 2}}));
  EXPECT_FALSE(reader.next());

  std::istringstream truncated("Content-Length: 10\r\n\r\n{}");
  dap::FrameReader short_reader(truncated);
  EXPECT_THROW(short_reader.next(), dap::FramingError);
}

TEST(Serve, ExitCodes) {
  std::istringstream clean(dap::frame_encode(json{{"seq", 1}, {"type", "request"}, {"command", "disconnect"}}));
  std::ostringstream out;
  EXPECT_EQ(dap::serve(clean, out), 0);
  auto decoded = dap::frame_decode(out.str());
  ASSERT_TRUE(decoded);
  EXPECT_EQ(decoded->message["command"], "disconnect");
  EXPECT_TRUE(decoded->message["success"].get<bool>());

  std::istringstream garbled("Content-Length: abc\r\n\r\n{}");
  std::ostringstream out2;
  EXPECT_EQ(dap::serve(garbled, out2), 1);

  std::istringstream bad_json("Content-Length: 3\r\n\r\n{x}");
  std::ostringstream out3;
  EXPECT_EQ(dap::serve(bad_json, out3), 0);
  auto err = dap::frame_decode(out3.str());
  ASSERT_TRUE(err);
  EXPECT_FALSE(err->message["success"].get<bool>());
}

TEST(Session, InitializeAdvertisesStepBack) {
  Harness h;
  json r = h.response("initialize", {{"adapterID", "verdap"}});
  EXPECT_TRUE(r["success"].get<bool>());
  EXPECT_TRUE(r["body"]["supportsStepBack"].get<bool>());
  EXPECT_TRUE(r["body"]["supportsConfigurationDoneRequest"].get<bool>());
  EXPECT_TRUE(r["body"]["supportsEvaluateForHovers"].get<bool>());
}

TEST(Session, LaunchAbsHasOneRootThread) {
  Harness h;
  std::vector<json> out = h.launch(data_path("abs.mv"));
  ASSERT_GE(out.size(), 4u);
  EXPECT_EQ(out[0]["type"], "response");
  EXPECT_EQ(out[1]["event"], "initialized");
  EXPECT_EQ(filter(out, "thread").size(), 1u);
  auto stopped = filter(out, "stopped");
  ASSERT_EQ(stopped.size(), 1u);
  EXPECT_EQ(stopped[0]["body"]["reason"], "entry");
  EXPECT_EQ(h.names(), (std::vector<std::string>{"0"}));
}

TEST(Session, LaunchErrors) {
  Harness h;
  EXPECT_FALSE(h.response("launch", {{"program", "/nonexistent/x.mv"}})["success"].get<bool>());
  EXPECT_FALSE(h.response("launch", json::object())["success"].get<bool>());
  std::string bad = temp_program("bad.mv", "proc f( {");
  json r = h.response("launch", {{"program", bad}});
  EXPECT_FALSE(r["success"].get<bool>());
  EXPECT_FALSE(r["message"].get<std::string>().empty());
  EXPECT_TRUE(h.names().empty());
}

TEST(Session, EmptyProgramTerminatesAtOnce) {
  Harness h;
  std::vector<json> out = h.launch(temp_program("empty.mv", ""));
  EXPECT_EQ(filter(out, "terminated").size(), 1u);
  EXPECT_EQ(filter(out, "exited").size(), 1u);
  EXPECT_TRUE(h.names().empty());
}

TEST(Session, OneRootThreadPerProcedure) {
  Harness h;
  h.launch(temp_program("two.mv", "proc a(x: int) { assert x == x; }\nproc b() { assume true; }\n"));
  EXPECT_EQ(h.names(), (std::vector<std::string>{"0", "1"}));
}

TEST(Session, TriviallyFailingAssertIsAFailedThread) {
  Harness h;
  std::vector<json> out = h.launch(data_path("assert_false.mv"));
  EXPECT_EQ(h.names(), (std::vector<std::string>{"0"}));
  int root = h.id_of("0");
  out = h.send("next", {{"threadId", root}});
  EXPECT_EQ(h.names(), (std::vector<std::string>{"00✗"}));
  auto stopped = filter(out, "stopped");
  ASSERT_EQ(stopped.size(), 1u);
  EXPECT_EQ(stopped[0]["body"]["reason"], "exception");
  auto output = filter(out, "output");
  ASSERT_EQ(output.size(), 1u);
  EXPECT_EQ(output[0]["body"]["category"], "stderr");
  EXPECT_NE(output[0]["body"]["output"].get<std::string>().find("any input"), std::string::npos);

  int failed = h.id_of("00✗");
  EXPECT_NE(failed, root);
  json trace = h.response("stackTrace", {{"threadId", failed}});
  ASSERT_EQ(trace["body"]["stackFrames"].size(), 1u);
  EXPECT_EQ(trace["body"]["stackFrames"][0]["line"], 1);
  json scopes = h.response("scopes", {{"frameId", trace["body"]["stackFrames"][0]["id"]}});
  ASSERT_EQ(scopes["body"]["scopes"].size(), 1u);
  EXPECT_EQ(scopes["body"]["scopes"][0]["name"], "State");
  json vars = h.response("variables", {{"variablesReference", scopes["body"]["scopes"][0]["variablesReference"]}});
  std::map<std::string, std::string> shown;
  for (const auto& v : vars["body"]["variables"]) shown[v["name"]] = v["value"];
  EXPECT_EQ(shown["negated"], "true");
  EXPECT_EQ(shown["status"], "failed");
  EXPECT_EQ(shown["path"], "true");
  EXPECT_FALSE(h.response("next", {{"threadId", failed}})["success"].get<bool>());
}

TEST(Session, BreakpointsAreVerifiedAgainstStatementLines) {
  Harness h;
  h.send("initialize");
  json r = h.response("setBreakpoints", {{"source", {{"path", data_path("abs.mv")}}},
                                          {"breakpoints", json::array({{{"line", 6}}, {{"line", 3}}})}});
  ASSERT_TRUE(r["success"].get<bool>());
  auto bps = r["body"]["breakpoints"];
  ASSERT_EQ(bps.size(), 2u);
  EXPECT_TRUE(bps[0]["verified"].get<bool>());
  EXPECT_EQ(bps[0]["line"], 6);
  EXPECT_FALSE(bps[1]["verified"].get<bool>());
  EXPECT_TRUE(bps[1].contains("message"));

  json cleared = h.response("setBreakpoints", {{"source", {{"path", data_path("abs.mv")}}}, {"breakpoints", json::array()}});
  EXPECT_TRUE(cleared["body"]["breakpoints"].empty());
}

TEST(Session, ContinueReportsTheObligationOnce) {
  Harness h;
  h.launch(temp_program("m.mv", "proc m() {\n  assume true;\n  assert false;\n}\n"));
  std::vector<json> out = h.send("continue", {{"threadId", h.id_of("0")}});
  auto output = filter(out, "output");
  ASSERT_EQ(output.size(), 1u);
  std::string text = output[0]["body"]["output"];
  EXPECT_NE(text.find("m: assertion might fail"), std::string::npos) << text;
  EXPECT_NE(text.find(":3"), std::string::npos) << text;
  EXPECT_EQ(h.names(), (std::vector<std::string>{"00✗"}));
  EXPECT_TRUE(filter(out, "terminated").empty());
}

TEST(Session, EvaluateUnderPaths) {
  Harness h;
  h.launch(data_path("abs.mv"));
  EXPECT_EQ(h.response("evaluate", {{"expression", "1 + 1"}})["body"]["result"], "2");
  h.send("next", {{"threadId", h.id_of("0")}});
  EXPECT_EQ(h.names(), (std::vector<std::string>{"00", "01"}));

  int then_id = h.id_of("00");
  int else_id = h.id_of("01");
  EXPECT_EQ(h.response("evaluate", {{"expression", "x <= 0"}, {"threadId", else_id}})["body"]["result"],
            "x₀ ≤ 0 [valid under path]");
  EXPECT_EQ(h.response("evaluate", {{"expression", "x <= 0"}, {"threadId", then_id}})["body"]["result"],
            "x₀ ≤ 0 [invalid: x₀ = 1]");
  EXPECT_EQ(h.response("evaluate", {{"expression", "-x >= 0"}, {"threadId", else_id}})["body"]["result"],
            "−x₀ ≥ 0 [valid under path]");
  json unknown_name = h.response("evaluate", {{"expression", "q + 1"}, {"threadId", else_id}});
  EXPECT_FALSE(unknown_name["success"].get<bool>());

  // y is only in scope once the else branch declares it.
  h.send("next", {{"threadId", else_id}});
  EXPECT_EQ(h.response("evaluate", {{"expression", "y >= 0"}, {"threadId", h.id_of("01")}})["body"]["result"],
            "−x₀ ≥ 0 [valid under path]");
}

TEST(Session, ErrorsForUnknownThreadsAndEmptyHistory) {
  Harness h;
  EXPECT_FALSE(h.response("stepBack", {{"threadId", 1}})["success"].get<bool>());
  h.launch(data_path("abs.mv"));
  json r = h.response("next", {{"threadId", 999}});
  EXPECT_FALSE(r["success"].get<bool>());
  EXPECT_NE(r["message"].get<std::string>().find("unknown thread"), std::string::npos);
  json back = h.response("stepBack", {{"threadId", h.id_of("0")}});
  EXPECT_FALSE(back["success"].get<bool>());
  EXPECT_EQ(back["message"], "nothing to undo");
  EXPECT_FALSE(h.response("bogus")["success"].get<bool>());
  EXPECT_FALSE(h.response("scopes", {{"frameId", 42}})["success"].get<bool>());
}

TEST(Session, StepBackRestoresThreadsAndIds) {
  Harness h;
  h.launch(data_path("abs.mv"));
  json before = h.response("threads")["body"]["threads"];
  h.send("next", {{"threadId", h.id_of("0")}});
  std::vector<json> out = h.send("stepBack", {{"threadId", h.id_of("00")}});
  EXPECT_EQ(h.response("threads")["body"]["threads"], before);
  EXPECT_EQ(filter(out, "thread").size(), 3u);  // two exits, one restart
  EXPECT_TRUE(filter(out, "output").empty());
}

TEST(Session, ThreadIdsAreNeverReused) {
  Harness h;
  h.launch(data_path("count.mv"));
  for (int round = 0; round < 8; ++round) {
    json threads = h.response("threads")["body"]["threads"];
    if (threads.empty()) break;
    h.send(round % 3 == 2 ? "stepBack" : "next", {{"threadId", threads[0]["id"]}});
  }
  // A started id may come back after a step back, but never for a different thread.
  std::map<int, std::string> first_seen;
  for (const auto& m : h.log) {
    if (m["type"] != "response" || m["command"] != "threads") continue;
    for (const auto& t : m["body"]["threads"]) {
      auto [it, fresh] = first_seen.emplace(t["id"].get<int>(), t["name"].get<std::string>());
      if (!fresh) {
        EXPECT_EQ(it->second, t["name"]) << "id " << it->first;
      }
    }
  }
  EXPECT_GT(first_seen.size(), 3u);
}

// Every request gets exactly one response echoing its seq; seq strictly increases.
TEST(Property, ProtocolConformance) {
  Harness h;
  h.launch(data_path("count.mv"));
  std::mt19937 rng(5);
  for (int i = 0; i < 60; ++i) {
    auto threads = h.response("threads")["body"]["threads"];
    if (threads.empty()) break;
    int id = threads[rng() % threads.size()]["id"];
    const char* cmds[] = {"next", "stepIn", "continue", "stepBack", "stackTrace", "evaluate"};
    std::string cmd = cmds[rng() % 6];
    json args = {{"threadId", id}};
    if (cmd == "evaluate") args["expression"] = "n >= 0";
    h.send(cmd, args);
  }
  int last_seq = 0;
  std::map<int, int> responses;
  std::vector<int> request_seqs;
  for (const auto& m : h.log) {
    if (m["type"] == "request") {
      request_seqs.push_back(m["seq"]);
      continue;
    }
    EXPECT_GT(m["seq"].get<int>(), last_seq);
    last_seq = m["seq"];
    if (m["type"] == "response") ++responses[m["request_seq"].get<int>()];
  }
  for (int s : request_seqs) EXPECT_EQ(responses[s], 1) << "request " << s;
  EXPECT_EQ(responses.size(), request_seqs.size());
}

std::string strip_ids(const std::vector<json>& log) {
  static const std::regex ids(R"re("(threadId|id|seq|request_seq)":\d+)re");
  std::string out;
  for (const auto& m : log) out += std::regex_replace(m.dump(), ids, "\"$1\":_") + "\n";
  return out;
}

TEST(Property, SessionsAreDeterministic) {
  auto run = [] {
    Harness h;
    h.launch(data_path("sum.mv"));
    for (int i = 0; i < 12; ++i) {
      auto threads = h.response("threads")["body"]["threads"];
      if (threads.empty()) break;
      h.send(i % 4 == 3 ? "stepBack" : "next", {{"threadId", threads.back()["id"]}});
    }
    return h.log;
  };
  std::vector<json> a = run();
  std::vector<json> b = run();
  EXPECT_EQ(a, b);
  EXPECT_EQ(strip_ids(a), strip_ids(b));
}

} // namespace
} // namespace verdap
