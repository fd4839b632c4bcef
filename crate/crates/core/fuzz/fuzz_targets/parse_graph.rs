#![no_main]

use graphtropy::format::{self, AnyGraph};
use libfuzzer_sys::fuzz_target;

// Whatever parses must survive a write/parse round trip unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    match format::parse_graph(text) {
        Ok(AnyGraph::Plain(g)) => {
            let again = serde_json::to_string(&format::graph_file(&g)).unwrap();
            assert_eq!(format::parse_plain_graph(&again).unwrap(), g);
        }
        Ok(AnyGraph::Weighted(wg)) => {
            let again = serde_json::to_string(&format::weighted_file(&wg)).unwrap();
            assert!(format::parse_weighted_graph(&again).is_ok());
        }
        Ok(AnyGraph::Ddg(d)) => {
            let again = serde_json::to_string(&format::ddg_file(&d)).unwrap();
            assert!(format::parse_ddg(&again).is_ok());
        }
        Err(_) => {}
    }
});
