#include <doctest.h>

#include "awf/digest.hpp"
#include "test_helpers.hpp"

using namespace awf;

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256 incremental equals one-shot") {
    Sha256 h;
    h.update("hello ");
    h.update("workflow ");
    h.update("world");
    CHECK(h.hex_digest() == sha256_hex("hello workflow world"));
}

TEST_CASE("sha256 long input crosses block boundaries") {
    std::string data(1000000, 'a');
    CHECK(sha256_hex(data) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("sha256_file matches in-memory digest") {
    test::TempDir tmp;
    const auto file = tmp.file("blob.bin", "some file content\n");
    CHECK(sha256_file(file) == sha256_hex("some file content\n"));
}
