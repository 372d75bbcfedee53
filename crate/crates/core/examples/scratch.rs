use startensor::*;
use std::sync::Arc;

fn semigroup_ring() -> Arc<QuotientRing> {
    let poly = PolyRing::new(FieldTag::Q, vec!["x".into(), "y".into(), "z".into()], vec![3, 4, 5]);
    let rels = ["y^2-x*z", "x^2*y-z^2", "x^3-y*z"].iter().map(|s| poly.parse(s).unwrap()).collect();
    QuotientRing::new(FieldTag::Q, vec!["x".into(), "y".into(), "z".into()], vec![3, 4, 5], rels, GbConfig::default()).unwrap()
}

fn main() {
    let r = semigroup_ring();
    let (ideal, _) = present_ideal(&r, &[r.parse("x").unwrap(), r.parse("y").unwrap()]).unwrap();
    let free2 = FPModule::free(r.clone(), 2);
    let proj = ModuleMap::certify(&free2, &ideal, identity_cols(&r.poly, 2)).unwrap();
    let (ker, incl) = proj.kernel().unwrap();
    let ext = Extension::new(incl, proj).unwrap();
    let id = ModuleMap::identity(&ker).unwrap();
    let pushed = pushout(&ext, &id).unwrap();
    let b2 = pushed.incl.target.clone();
    let hom = hom_module(&b2, &free2).unwrap();
    println!("hom gens: {}", hom.gens.len());
    for k in 0..hom.gens.len() {
        println!("gen {} deg {:?}", k, hom.gen_degree(k).unwrap());
    }
    // what does gen_degrees say now for b2?
    println!("b2 degrees: {:?}", b2.gen_degrees().unwrap());
    // constants of gen cols
    let p = &r.poly;
    for k in 0..hom.gens.len() {
        let consts: Vec<String> = hom.gens[k].matrix.iter().map(|c| {
            format!("({},{})", p.display(&p.component(c,0)), p.display(&p.component(c,1)))
        }).collect();
        println!("gen {}: {:?}", k, consts);
    }
}
