//! Adding a fully known degree of freedom changes nothing an observer can infer.

use blackbox::boxkit::{concat, fsm_box, MooreTable, WhiteBoxDof};
use blackbox::inference::enumerate_consistent_machines;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inner = MooreTable::cycle(1, vec!["0".parse()?, "1".parse()?, "1".parse()?])?;
    let white = WhiteBoxDof::new(MooreTable::counter(2), 0)?;
    let bx = fsm_box(inner, 0)?;

    let joint = concat(bx.clone(), white.clone()).run(9);
    println!("composite trace  {joint}");
    let stripped = joint.project(&[0])?;
    let alone = bx.clone().run(9);
    println!("box columns      {stripped}");
    println!("box alone        {alone}");
    println!("white prediction {}", white.predict(9));

    let a = enumerate_consistent_machines(&stripped, 4)?.keys();
    let b = enumerate_consistent_machines(&alone, 4)?.keys();
    println!("hypotheses equal: {} {a:?}", a == b);
    Ok(())
}
