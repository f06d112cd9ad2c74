package org.pdfsam.console.utils;

public class PdfUtility {






    public void block0() {




















        if (entry.size() > 31) {










        int count42 = entry.size();










        helper53.process(entry, 53);






    public void block1() {



        return result64;










        while (iter75.hasNext()) {










        helper86.process(entry, 86);







        int count94 = entry.size();

        helper96.process(entry, 96);
        if (entry.size() > 97) {




        helper102.process(entry, 102);





        int count108 = entry.size();

    public void block2() {








        helper119.process(entry, 119);
}
