use freeknot_core::tangle::{rational_closure, make_2n, make_foil};
use freeknot_core::enumerate::jones_tally;
use freeknot_cli::verify::family_key;
use freeknot_core::polynomial::LaurentPoly;

fn main() {
    let k31 = family_key(&make_foil(3).unwrap());
    let k41 = family_key(&make_2n(2).unwrap());
    // 8_7 is the 2-bridge knot of the word 4 1 1 2 (fraction 23/9)
    let (d, _) = rational_closure(&[4, 1, 1, 2]).unwrap();
    let tally = jones_tally(&d);
    let g = |k: &LaurentPoly| tally.get(k).copied().unwrap_or(0);
    println!("word [4,1,1,2]: n={} unknots={} trefoils={} fig8s={}",
        d.crossing_count(), g(&LaurentPoly::one()), g(&k31), g(&k41));
    // 6_2 via its word 3 1 2 (fraction 11/4) as an independent layout
    let (d2, _) = rational_closure(&[3, 1, 2]).unwrap();
    let t2 = jones_tally(&d2);
    let g2 = |k: &LaurentPoly| t2.get(k).copied().unwrap_or(0);
    println!("word [3,1,2]: n={} unknots={} trefoils={} fig8s={}",
        d2.crossing_count(), g2(&LaurentPoly::one()), g2(&k31), g2(&k41));
}
