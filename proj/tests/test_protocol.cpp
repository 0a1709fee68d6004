#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "camcp/planner.hpp"
#include "camcp/protocol.hpp"
#include "camcp/trace.hpp"
#include "oracles.hpp"

using namespace camcp;

namespace {

ProtocolError::Kind decode_error(const std::string& line)
{
    try {
        decode(line);
    } catch (const ProtocolError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "decoded: " << line;
    return ProtocolError::Kind::out_of_order;
}

std::string decode_field(const std::string& line)
{
    try {
        decode(line);
    } catch (const ProtocolError& e) {
        return e.field();
    }
    return "<none>";
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Protocol, RandomEnvelopesRoundTrip)
{
    std::mt19937_64 rng(99);
    std::array<int, 8> seen{};
    for (int i = 0; i < 10000; ++i) {
        const Envelope e(1 + static_cast<std::int64_t>(rng() % 1000), oracle::random_message(rng));
        ++seen[e.message().index()];
        const std::string line = encode(e);
        ASSERT_EQ(line.find('\n'), std::string::npos);
        const Envelope back = decode(line);
        ASSERT_EQ(back, e) << line;
        ASSERT_EQ(encode(back), line);
    }
    for (int n : seen)
        EXPECT_GT(n, 1000);
}

TEST(Protocol, VariantOrderMatchesMessageType)
{
    EXPECT_EQ(message_type(ToolDeclaration{}), MessageType::tool_declaration);
    EXPECT_EQ(message_type(PlanRequest{}), MessageType::plan_request);
    EXPECT_EQ(message_type(ContextSeed{}), MessageType::context_seed);
    EXPECT_EQ(message_type(ContextWrite{}), MessageType::context_write);
    EXPECT_EQ(message_type(ContextRead{}), MessageType::context_read);
    EXPECT_EQ(message_type(CompletionSignal{}), MessageType::completion_signal);
    EXPECT_EQ(message_type(SummaryRequest{}), MessageType::summary_request);
    EXPECT_EQ(message_type(FinalResponse{}), MessageType::final_response);
}

TEST(Protocol, ContextSeedMatchesGoldenLine)
{
    Query q;
    q.raw_text = "Plan a three-day trip around Seattle with adventurous activities, vegan food and a $1500 budget.";
    q.params = {{"destination", "Seattle"}, {"days", 3}, {"budget", 1500}, {"preferences", {"adventurous", "vegan"}}};
    const std::string line = encode(Envelope(1, ContextSeed{blueprint_for(q)}));
    std::string golden = read_file(CAMCP_GOLDEN_DIR "/context_seed.line");
    while (!golden.empty() && golden.back() == '\n')
        golden.pop_back();
    EXPECT_EQ(line, golden);
    EXPECT_EQ(decode(golden), Envelope(1, ContextSeed{blueprint_for(q)}));
}

TEST(Protocol, EnvelopeRejectsBadSeq)
{
    EXPECT_THROW(Envelope(0, ContextRead{"k"}), std::invalid_argument);
}

TEST(Protocol, DecodeErrorsAreTyped)
{
    using K = ProtocolError::Kind;
    EXPECT_EQ(decode_error("{\"msg_type\":"), K::malformed_syntax);
    EXPECT_EQ(decode_error("[1,2]"), K::malformed_syntax);
    EXPECT_EQ(decode_error(R"({"msg_type":"teleport","seq":1,"payload":{}})"), K::unknown_msg_type);
    EXPECT_EQ(decode_error(R"({"msg_type":"context_read","seq":1,"payload":{}})"), K::schema_violation);
    EXPECT_EQ(decode_error(R"({"msg_type":"context_read","seq":0,"payload":{"key":"k"}})"), K::schema_violation);
    EXPECT_EQ(decode_error(R"({"msg_type":"context_read","seq":1,"payload":{"key":"k","extra":1}})"),
              K::schema_violation);
    EXPECT_EQ(decode_error(R"({"msg_type":"context_read","seq":1,"payload":{"key":"k"},"x":1})"),
              K::schema_violation);
}

TEST(Protocol, SchemaViolationsNameTheField)
{
    EXPECT_EQ(decode_field(R"({"msg_type":"context_read","seq":1,"payload":{}})"), "key");
    EXPECT_EQ(decode_field(R"({"msg_type":"tool_declaration","seq":1,"payload":{"server_id":"s","tools":[{"description":"d","param_schema":{}}]}})"),
              "tools[0].name");
    EXPECT_EQ(decode_field(R"({"msg_type":"final_response","seq":1,"payload":{"text":7}})"), "text");
}

TEST(Protocol, SequenceValidatorFollowsTheFlow)
{
    Query q;
    q.raw_text = "t";
    q.params = {{"destination", "X"}, {"days", 1}, {"budget", 1}};
    const std::vector<Envelope> good{Envelope(1, PlanRequest{q}),
                                     Envelope(1, ToolDeclaration{"s", {}}),
                                     Envelope(1, ContextSeed{blueprint_for(q)}),
                                     Envelope(1, ContextWrite{"a", 1}),
                                     Envelope(2, ContextRead{"a"}),
                                     Envelope(3, ContextWrite{"b", 2}),
                                     Envelope(2, CompletionSignal{"done"}),
                                     Envelope(3, SummaryRequest{Value::object()}),
                                     Envelope(2, FinalResponse{"ok"})};
    EXPECT_NO_THROW(validate_sequence(good));
    EXPECT_NO_THROW(validate_sequence(std::vector<Envelope>{}));

    auto bad = good;
    std::swap(bad[1], bad[2]);
    try {
        validate_sequence(bad);
        FAIL();
    } catch (const ProtocolError& e) {
        EXPECT_EQ(e.kind(), ProtocolError::Kind::out_of_order);
        EXPECT_EQ(e.position(), 3u);
    }
    bad = good;
    bad.push_back(Envelope(9, ContextWrite{"late", 1}));
    EXPECT_THROW(validate_sequence(bad), ProtocolError);
}

TEST(Protocol, GoldenTracesAcceptEveryOrderAndRejectEverySwap)
{
    // Swaps of two messages at the same step are indistinguishable by type
    // and are not counted.
    for (const char* name : {"travel_ca_seed0.jsonl", "wedding_p5_ca_seed0.jsonl"}) {
        std::ifstream in(std::string(CAMCP_GOLDEN_DIR) + "/" + name);
        ASSERT_TRUE(in) << name;
        const auto msgs = Trace::parse(in).protocol_messages();
        ASSERT_GE(msgs.size(), 7u);
        EXPECT_GT(oracle::swap_check(msgs), 0) << name;
    }
}
