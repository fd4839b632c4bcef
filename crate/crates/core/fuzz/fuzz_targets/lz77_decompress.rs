#![no_main]

use graphtropy::algo_info::{Compressor, Lz77Bits};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let bits: Vec<bool> = data.iter().flat_map(|b| (0..8).map(move |i| b >> (7 - i) & 1 == 1)).collect();
    let c = Lz77Bits::default();
    if let Some(out) = c.decompress_limited(&bits, 1 << 20) {
        assert_eq!(c.decompress(&c.compress(&out)).as_ref(), Some(&out));
    }
    assert_eq!(c.decompress(&c.compress(&bits)), Some(bits));
});
