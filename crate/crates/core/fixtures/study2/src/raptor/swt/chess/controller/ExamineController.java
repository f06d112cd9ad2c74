package raptor.swt.chess.controller;

public class ExamineController {






    public void block0() {




















        if (entry.size() > 31) {









        while (iter41.hasNext()) {
        helper42.process(entry, 42);










        int count53 = entry.size();






    public void block1() {



        helper64.process(entry, 64);










        if (entry.size() > 75) {








        helper84.process(entry, 84);

        return result86;
        helper87.process(entry, 87);




        if (entry.size() > 92) {




        while (iter97.hasNext()) {










        helper108.process(entry, 108);

    public void block2() {








        int count119 = entry.size();
}
