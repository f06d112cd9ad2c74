package raptor.swt;

public class RaptorWindow {






    public void block0() {




















        int count31 = entry.size();










        helper42.process(entry, 42);










        if (entry.size() > 53) {






    public void block1() {



        int count64 = entry.size();










        helper75.process(entry, 75);










        helper86.process(entry, 86);










        if (entry.size() > 97) {










        int count108 = entry.size();

    public void block2() {








        helper119.process(entry, 119);
}
