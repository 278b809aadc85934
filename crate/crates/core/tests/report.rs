use twistgen::report::{DataInfo, CAVEAT};
use twistgen::surface::default_document;
use twistgen::{default_table, verify};

fn run(g: usize, seed: u64) -> twistgen::Report {
    let data = DataInfo::new("embedded", default_document(g).unwrap());
    verify(&default_table(g).unwrap(), data, seed).unwrap()
}

#[test]
fn machine_report_is_byte_identical_for_same_seed() {
    assert_eq!(run(13, 7).to_json(), run(13, 7).to_json());
}

#[test]
fn machine_report_has_contract_fields() {
    let v: serde_json::Value = serde_json::from_str(&run(14, 3).to_json()).unwrap();
    assert_eq!(v["genus"], 14);
    assert_eq!(v["caveat"], CAVEAT);
    let check = &v["checks"][0];
    for k in ["id", "level", "paper_line", "pass"] {
        assert!(check.get(k).is_some(), "{k}");
    }
    assert_eq!(v["orders"]["T"], 13);
    assert_eq!(v["orders"]["sigma"], 2);
    assert_eq!(v["orders"]["third"], 2);
    assert_eq!(v["group_order"]["match"], true);
    assert_eq!(v["group_order"]["computed"], v["group_order"]["target"]);
    assert_eq!(v["determinants"]["T"], 1);
    assert_eq!(v["determinants"]["sigma"], 1);
}

#[test]
fn non_redundancy_is_reported() {
    let r = run(13, 0);
    let red = &r.group_order.as_ref().unwrap().non_redundancy;
    assert_eq!(red.len(), 3);
    // Without T: two involutions. Without the third: label permutations only.
    assert!(red[0].strictly_smaller);
    assert!(red[2].strictly_smaller);
    assert_eq!(red[0].order, "4");
    assert_eq!(red[2].order, "3113510400");
    // T and the third generator already generate everything.
    assert!(!red[1].strictly_smaller);
}

#[test]
fn text_report_carries_caveat() {
    assert!(run(13, 0).to_text().contains(CAVEAT));
}
