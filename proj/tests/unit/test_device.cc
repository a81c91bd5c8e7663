#include <map>
#include <random>

#include "doctest.h"
#include "hzkv/device.h"

using namespace hzkv;

namespace {
std::vector<uint8_t> Bytes(const std::string& s) {
  return std::vector<uint8_t>(s.begin(), s.end());
}
}  // namespace

TEST_CASE("append advances the write pointer and returns the old offset") {
  EventLoop loop;
  DeviceProfile p = DeviceProfile::DeskSsd(4);
  ZonedDevice dev("ssd", p, &loop);
  uint64_t off = 123;
  REQUIRE(dev.Append(0, Bytes("abc"), &off).ok());
  CHECK(off == 0);
  CHECK(dev.zone(0).write_pointer == 3);
  CHECK(dev.zone(0).cond() == ZoneCond::kOpen);
  REQUIRE(dev.Append(0, Bytes("de"), &off).ok());
  CHECK(off == 3);
  CHECK(dev.zone(0).write_pointer == 5);
}

TEST_CASE("zero-length append is an identity") {
  EventLoop loop;
  ZonedDevice dev("ssd", DeviceProfile::DeskSsd(1), &loop);
  uint64_t off = 9;
  REQUIRE(dev.Append(0, {}, &off).ok());
  CHECK(off == 0);
  CHECK(dev.zone(0).write_pointer == 0);
  CHECK(dev.zone(0).cond() == ZoneCond::kEmpty);
}

TEST_CASE("desk SST fills 93.9% of an SSD zone") {
  EventLoop loop;
  ZonedDevice dev("ssd", DeviceProfile::DeskSsd(1), &loop);
  const uint64_t sst_bytes = 1035468;  // 1,011.2 KiB
  std::vector<uint8_t> sst(sst_bytes, 0x5a);
  uint64_t off = 1;
  REQUIRE(dev.Append(0, sst, &off).ok());
  CHECK(off == 0);
  CHECK(dev.zone(0).write_pointer == sst_bytes);
  double util = double(dev.zone(0).write_pointer) / double(dev.zone_capacity());
  CHECK(util > 0.9385);
  CHECK(util < 0.9395);
  // and the same SST needs exactly four desk HDD zones
  uint64_t hdd_cap = DeviceProfile::DeskHdd(1).zone_capacity;
  CHECK((sst_bytes + hdd_cap - 1) / hdd_cap == 4);
  CHECK(double(sst_bytes - 3 * hdd_cap) / double(hdd_cap) == doctest::Approx(0.95).epsilon(0.001));
}

TEST_CASE("append beyond capacity reports ZoneFull and full zones reject appends") {
  EventLoop loop;
  DeviceProfile p = DeviceProfile::DeskSsd(1);
  ZonedDevice dev("ssd", p, &loop);
  std::vector<uint8_t> fill(p.zone_capacity - 4 * KiB, 1);
  REQUIRE(dev.Append(0, fill, nullptr).ok());
  std::vector<uint8_t> eight(8 * KiB, 2);
  Status st = dev.Append(0, eight, nullptr);
  CHECK(st.code() == StatusCode::kZoneFull);
  // top the zone off exactly, then it is FULL and not writable
  std::vector<uint8_t> four(4 * KiB, 3);
  REQUIRE(dev.Append(0, four, nullptr).ok());
  CHECK(dev.zone(0).cond() == ZoneCond::kFull);
  st = dev.Append(0, four, nullptr);
  CHECK(st.code() == StatusCode::kZoneNotWritable);
}

TEST_CASE("reads past the write pointer fail, reset makes contents unreadable") {
  EventLoop loop;
  ZonedDevice dev("ssd", DeviceProfile::DeskSsd(1), &loop);
  REQUIRE(dev.Append(0, Bytes("abc"), nullptr).ok());
  std::vector<uint8_t> out;
  REQUIRE(dev.Read(0, 0, 3, &out).ok());
  CHECK(out == Bytes("abc"));
  CHECK(dev.Read(0, 3, 1, &out).code() == StatusCode::kReadBeyondWritePointer);
  REQUIRE(dev.ResetZone(0).ok());
  CHECK(dev.zone(0).write_pointer == 0);
  CHECK(dev.zone(0).cond() == ZoneCond::kEmpty);
  CHECK(dev.Read(0, 0, 1, &out).code() == StatusCode::kReadBeyondWritePointer);
  // reuse after reset starts at offset zero again
  uint64_t off = 7;
  REQUIRE(dev.Append(0, Bytes("xyz"), &off).ok());
  CHECK(off == 0);
}

TEST_CASE("random append/read/reset agrees with a flat shadow buffer") {
  EventLoop loop;
  DeviceProfile p = DeviceProfile::DeskHdd(4);
  ZonedDevice dev("hdd", p, &loop);
  std::mt19937_64 rng(42);
  // shadow: one flat buffer per zone plus its write pointer
  std::vector<std::vector<uint8_t>> shadow(p.zone_count);
  for (int step = 0; step < 20000; step++) {
    uint32_t zone = rng() % p.zone_count;
    switch (rng() % 4) {
      case 0: {  // append
        uint64_t len = rng() % 3000;
        std::vector<uint8_t> data(len);
        for (auto& b : data) b = static_cast<uint8_t>(rng());
        uint64_t off = 0;
        Status st = dev.Append(zone, data, &off);
        if (shadow[zone].size() + len <= p.zone_capacity) {
          if (shadow[zone].size() == p.zone_capacity) {
            CHECK(st.code() == StatusCode::kZoneNotWritable);
          } else {
            REQUIRE(st.ok());
            CHECK(off == shadow[zone].size());
            shadow[zone].insert(shadow[zone].end(), data.begin(), data.end());
          }
        } else {
          CHECK(!st.ok());
        }
        break;
      }
      case 1: {  // read
        uint64_t wp = shadow[zone].size();
        uint64_t off = rng() % (p.zone_capacity + 1);
        uint64_t len = rng() % 4096;
        std::vector<uint8_t> out;
        Status st = dev.Read(zone, off, len, &out);
        if (off + len <= wp) {
          REQUIRE(st.ok());
          CHECK(std::equal(out.begin(), out.end(), shadow[zone].begin() + off));
        } else {
          CHECK(st.code() == StatusCode::kReadBeyondWritePointer);
        }
        break;
      }
      case 2: {  // reset (sparingly)
        if (rng() % 16 == 0) {
          REQUIRE(dev.ResetZone(zone).ok());
          shadow[zone].clear();
        }
        break;
      }
      case 3: {  // write pointer check
        CHECK(dev.zone(zone).write_pointer == shadow[zone].size());
        break;
      }
    }
    // sum of write pointers never exceeds device capacity
    CHECK(dev.OccupiedBytes() <= uint64_t(p.zone_count) * p.zone_capacity);
  }
}

TEST_CASE("service times follow the measured device rates") {
  EventLoop loop;
  ZonedDevice ssd("ssd", DeviceProfile::DeskSsd(1), &loop);
  ZonedDevice hdd("hdd", DeviceProfile::DeskHdd(1), &loop);
  // 1 MiB sequential write on the SSD: 1/1002.8 s
  CHECK(ssd.ServiceTime(IoKind::kSeqWrite, MiB) ==
        doctest::Approx(1.0 / 1002.8).epsilon(1e-9));
  // 4 KiB random read on the HDD: 1/115 s
  CHECK(hdd.ServiceTime(IoKind::kRandRead, 4 * KiB) ==
        doctest::Approx(1.0 / 115.0).epsilon(1e-9));
  // reading exactly rate-many bytes takes exactly one second
  uint64_t rate = static_cast<uint64_t>(DeviceProfile::DeskHdd(1).seq_read_bps);
  CHECK(hdd.ServiceTime(IoKind::kSeqRead, rate) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sequential service time is exactly linear in size") {
  EventLoop loop;
  ZonedDevice ssd("ssd", DeviceProfile::DeskSsd(1), &loop);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; i++) {
    uint64_t size = 1 + rng() % (64 * MiB);
    CHECK(ssd.ServiceTime(IoKind::kSeqRead, 2 * size) ==
          2.0 * ssd.ServiceTime(IoKind::kSeqRead, size));
    CHECK(ssd.ServiceTime(IoKind::kSeqWrite, 2 * size) ==
          2.0 * ssd.ServiceTime(IoKind::kSeqWrite, size));
  }
}

TEST_CASE("one channel per device: same-device requests serialize, devices overlap") {
  EventLoop loop;
  ZonedDevice ssd("ssd", DeviceProfile::DeskSsd(2), &loop);
  ZonedDevice hdd("hdd", DeviceProfile::DeskHdd(2), &loop);
  SimTime a = ssd.Occupy(IoKind::kSeqWrite, MiB);
  SimTime b = ssd.Occupy(IoKind::kSeqWrite, MiB);
  CHECK(b == doctest::Approx(2 * a));
  SimTime c = hdd.Occupy(IoKind::kSeqWrite, MiB);
  CHECK(c == doctest::Approx(MiB / (210.0 * MiB)));  // not delayed by the SSD
}

TEST_CASE("claims hide empty zones from the allocator until written or released") {
  EventLoop loop;
  ZonedDevice dev("ssd", DeviceProfile::DeskSsd(3), &loop);
  CHECK(dev.EmptyUnclaimedCount() == 3);
  auto z0 = dev.ClaimEmptyZone();
  REQUIRE(z0.has_value());
  CHECK(*z0 == 0);
  CHECK(dev.EmptyUnclaimedCount() == 2);
  auto z1 = dev.ClaimEmptyZone();
  CHECK(*z1 == 1);
  dev.ReleaseClaim(*z1);
  CHECK(dev.EmptyUnclaimedCount() == 2);
  CHECK(*dev.ClaimEmptyZone() == 1);
  REQUIRE(dev.Append(*z0, Bytes("x"), nullptr).ok());
  CHECK_FALSE(dev.claimed(*z0));
}

TEST_CASE("device profile config schema round-trips") {
  ConfigMap cfg;
  REQUIRE(ConfigMap::ParseString("kind = HDD\n"
                                 "zone_capacity_bytes = 262144\n"
                                 "zone_count = 128\n"
                                 "seq_read_Bps = 220200960\n"
                                 "seq_write_Bps = 220200960\n"
                                 "rand_read_iops = 115.0\n",
                                 &cfg)
              .ok());
  DeviceProfile p;
  REQUIRE(DeviceProfile::FromConfig(cfg, &p).ok());
  CHECK(p.kind == DeviceKind::kHdd);
  CHECK(p.zone_capacity == 262144);
  CHECK(p.zone_count == 128);
  CHECK(p.rand_read_iops == doctest::Approx(115.0));

  ConfigMap bad;
  REQUIRE(ConfigMap::ParseString("kind = HDD\nzone_capacity_bytes = 0\n"
                                 "zone_count = 4\nseq_read_Bps = 1\n"
                                 "seq_write_Bps = 1\nrand_read_iops = 1\n",
                                 &bad)
              .ok());
  CHECK(DeviceProfile::FromConfig(bad, &p).code() == StatusCode::kConfigError);
}
