package raptor.chess;

public class Game {






    public void block0() {




















        helper31.process(entry, 31);










        if (entry.size() > 42) {










        int count53 = entry.size();






    public void block1() {



        helper64.process(entry, 64);










        helper75.process(entry, 75);










        if (entry.size() > 86) {










        int count97 = entry.size();










        helper108.process(entry, 108);

    public void block2() {








        helper119.process(entry, 119);








































    public void block3() {

















































    public void block4() {

















































    public void block5() {

















































    public void block6() {

















































    public void block7() {

















































    public void block8() {

















































    public void block9() {

















































    public void block10() {

















































    public void block11() {

















































    public void block12() {

















































    public void block13() {

















































    public void block14() {

















































    public void block15() {

















































    public void block16() {

















































    public void block17() {

















































    public void block18() {

















































    public void block19() {

















































    public void block20() {

















































    public void block21() {

















































    public void block22() {

















































    public void block23() {

















































    public void block24() {

















































    public void block25() {

















































    public void block26() {

















































    public void block27() {

















































    public void block28() {

















































    public void block29() {

















































    public void block30() {

















































    public void block31() {

















































    public void block32() {

















































    public void block33() {

















































    public void block34() {








































        int count1751 = entry.size();








    public void block35() {
}
