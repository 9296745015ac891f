// Protocol test double. Speaks the cpath line protocol and, depending on
// argv[1], misbehaves in controlled ways:
//   (none)        answer "1" for every row
//   short         answer n-1 labels, then END
//   junk          answer a non-integer line
//   die-mid       exit after half the labels
//   silent        never answer the handshake
//   bad-hello     answer the handshake with garbage
#include <cstdio>
#include <cstring>
#include <string>
#include <unistd.h>

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "";
  char line[1 << 16];

  if (!std::fgets(line, sizeof(line), stdin)) return 1;
  if (std::strncmp(line, "HELLO cpath/1", 13) != 0) return 1;
  if (mode == "silent") {
    ::sleep(3600);
    return 0;
  }
  if (mode == "bad-hello") {
    std::printf("HOWDY\n");
    std::fflush(stdout);
    return 0;
  }
  std::printf("OK 2\n");
  std::fflush(stdout);

  for (;;) {
    if (!std::fgets(line, sizeof(line), stdin)) return 0;
    unsigned long n = 0, p = 0;
    if (std::sscanf(line, "PREDICT %lu %lu", &n, &p) != 2) return 1;
    for (unsigned long i = 0; i < n; ++i) {
      if (!std::fgets(line, sizeof(line), stdin)) return 1;  // consume the row
      if (mode == "short" && i + 1 == n) continue;           // swallow one answer
      if (mode == "die-mid" && i == n / 2) return 0;
      if (mode == "junk" && i == 0) {
        std::printf("not-a-label\n");
        continue;
      }
      std::printf("1\n");
    }
    std::printf("END\n");
    std::fflush(stdout);
  }
}
